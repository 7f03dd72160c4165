//! The table printed by `mdim paper-map`: each public operation next to the
//! mathematical statement it computes or checks.

pub struct Entry {
    pub operation: &'static str,
    pub statement: &'static str,
}

const fn e(operation: &'static str, statement: &'static str) -> Entry {
    Entry { operation, statement }
}

pub const TABLE: &[Entry] = &[
    e("metric::covering_number", "#(X,d,ε): least number of open sets of diameter < ε covering X"),
    e("metric::max_separated_set", "largest S with d(x,y) ≥ ε for distinct x,y ∈ S; |S| ≤ #(X,d,ε)"),
    e("metric::tame_growth_profile", "ε^δ log #(X,d,ε) → 0 for every δ > 0"),
    e("dynamics::orbit_distance (max)", "d_n(x,y) = max_{0≤k<n} d(T^k x, T^k y)"),
    e("dynamics::orbit_distance (avg)", "d̄_n(x,y) = (1/n) Σ_{0≤k<n} d(T^k x, T^k y)"),
    e("dynamics::HilbertCube", "shift on [0,1]^ℤ with d(x,y) = Σ 2^{−|k|} |x_k − y_k|"),
    e("dynamics::CounterexampleSystem", "levels X_n built from the families A_n with log |A_n| of order 2^n (log n)^2"),
    e("mean_dim::growth_profile", "(1/n) log #(X,d_n,ε) and S(X,T,d,ε) = lim_n of it"),
    e("dynamics::HilbertCover", "explicit cover of (X,d_n) by (1+⌊12/ε⌋)^{n+2l+1} sets of diameter < ε"),
    e("mean_dim::hilbert_profile", "(1+⌊1/ε⌋)^n ≤ #(X,d_n,ε) ≤ (1+⌊12/ε⌋)^{n+2l+1} on the Hilbert cube"),
    e("mean_dim::mdim_slope_from_profiles", "mdim_M = lim S(X,T,d,ε)/|log ε| as ε → 0, fitted at finite ε"),
    e("mean_dim::lemma33_check", "(1/n) log #(X,d_n,2Lε) ≤ log 2 + (1/L) log #(X,d,ε) + (1/n) log #(X,d̄_n,ε) for integer L"),
    e("mean_dim::variational_report", "R_μ(ε) ≤ S̃(X,T,d,ε), R̃_μ(ε) ≤ S(X,T,d,ε) and S̃ ≤ S at finite ε"),
    e("mean_dim::counterexample_report", "d̄_N(x,0) < ε/2 on X_n while X_n stays (1/n)-separated under d_N"),
    e("info::mutual_information", "I(X;Y) = Σ p(x,y) log p(x,y)/(p(x)p(y)) in nats"),
    e("info::partition_mutual_information", "I(X;Y) as a supremum over finite partitions"),
    e("info::quantize_y", "data processing: I(X;f(Y)) ≤ I(X;Y)"),
    e("info::fano_gap", "H(X|Y) ≤ H(P_e) + P_e log |X|"),
    e("info::separated_mi_lower_bounds (average)", "X uniform on a 2Dε-separated S, E d(X,Y) < ε ⇒ I(X;Y) ≥ (1−1/D) log |S| − H(1/D)"),
    e("info::separated_mi_lower_bounds (counting)", "I(X;Y) ≥ log |S| − nH(α) − αn log |A| under the counting condition"),
    e("info::additivity_checks", "I(Y;X,Z) ≤ I(Y;X)+I(Y;Z) for X−Y−Z, and ≥ for X ⊥ Z"),
    e("info::concavity_in_source", "I(μ,ν) is concave in the source μ"),
    e("info::convexity_in_channel", "I(μ,ν) is convex in the channel ν"),
    e("rd::blahut_arimoto", "R(D) = min I(X;Y) over channels with E d(X,Y) ≤ D"),
    e("rd::estimate_rate", "R_μ(ε), R_{μ,p}(ε) and R̃_μ(ε,α) per step at finite block lengths"),
    e("rd::r_epsilon_uniform", "r(ε) of the uniform source on [0,1] grows like |log ε|"),
    e("rd::chain_check", "block channels σ_{n,i} and the averaged chain inequality over block offsets"),
    e("rd::empirical_invariant_measure", "(1/n) Σ_{k<n} T^k_* of a measure on a separated set"),
    e("transport::wasserstein1", "W(μ,ν) = min over couplings π of Σ d(a,b) π(a,b)"),
    e("transport::greedy_cyclic_coupling", "coupling built by identifying the support with a cyclic group"),
    e("transport::diagonal_mass_gap", "π(a,b) ≤ W(μ,ν)/d(a,b) off the diagonal, so μ_k → μ forces π_k → (Id×Id)_*μ"),
];

/// Two columns, left-aligned, one entry per line.
pub fn render() -> String {
    let width = TABLE.iter().map(|r| r.operation.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for r in TABLE {
        let pad = width - r.operation.chars().count();
        s.push_str(r.operation);
        s.extend(std::iter::repeat(' ').take(pad + 2));
        s.push_str(r.statement);
        s.push('\n');
    }
    s
}
