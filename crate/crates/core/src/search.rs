//! Numerical evidence for gate-count optimality.
//!
//! Every gate of a fixed structure is `exp(i Σ p_k σ_k)` over the fifteen
//! non-identity Pauli products, so a `k`-gate structure has `15k` real
//! parameters. The fit to a target is measured by infidelity and improved by
//! L-BFGS with an analytic gradient from multiple seeded starts.

use std::f64::consts::PI;

use nalgebra::SMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{Circuit, PairClass, StructureSignature, TwoQubitGate};
use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::{eig_unitary, infidelity, ComplexMatrix, UNITARY_TOL};

type M4 = SMatrix<Complex64, 4, 4>;
type M8 = SMatrix<Complex64, 8, 8>;

/// Largest `k_max` accepted by [`optimality_evidence`].
pub const K_MAX_LIMIT: usize = 6;
/// Parameters per gate.
pub const GATE_PARAMS: usize = 15;
/// Floors above this count as negative evidence. Empirical convention.
pub const NEGATIVE_THRESHOLD: f64 = 1e-3;
/// Floors below this count as a fit. Empirical convention.
pub const POSITIVE_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    /// Random starts per structure.
    pub restarts: usize,
    pub max_iterations: usize,
    /// A run stops once the objective, or its decrease over an iteration,
    /// falls below this.
    pub convergence_tol: f64,
    pub seed: u64,
    /// L-BFGS history length.
    pub memory: usize,
    /// Sufficient-decrease constant of the backtracking line search.
    pub armijo: f64,
    /// Step shrink factor per backtracking trial.
    pub backtrack: f64,
    pub max_backtracks: usize,
    /// Keep every accepted objective value of every restart.
    pub record_trajectories: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iterations: 2000,
            convergence_tol: 1e-12,
            seed: 0,
            memory: 10,
            armijo: 1e-4,
            backtrack: 0.5,
            max_backtracks: 60,
            record_trajectories: false,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.restarts < 1 {
            return bad("restarts must be at least 1");
        }
        if self.max_iterations < 1 {
            return bad("max_iterations must be at least 1");
        }
        if !(self.convergence_tol > 0.0) {
            return bad("convergence_tol must be positive");
        }
        if self.memory < 1 {
            return bad("memory must be at least 1");
        }
        if !(self.armijo > 0.0 && self.armijo < 1.0) {
            return bad("armijo must lie in (0, 1)");
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return bad("backtrack must lie in (0, 1)");
        }
        Ok(())
    }
}

/// Where a start came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartKind {
    Random,
    Witness,
    Extension,
}

#[derive(Debug, Clone, Serialize)]
pub struct RestartOutcome {
    pub kind: StartKind,
    pub infidelity: f64,
    pub iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub structure: StructureSignature,
    pub best_infidelity: f64,
    pub best_circuit: Circuit,
    pub best_params: Vec<f64>,
    /// Random starts first, then injected starts, in the order given.
    pub per_restart: Vec<RestartOutcome>,
}

impl SearchResult {
    pub fn iterations_used(&self) -> Vec<usize> {
        self.per_restart.iter().map(|r| r.iterations).collect()
    }
}

/// The fifteen Pauli products `P_a ⊗ P_b`, `(a, b) ≠ (I, I)`, `a` slow.
fn pauli_basis() -> [M4; GATE_PARAMS] {
    let one = [gates::identity2(), gates::x(), gates::y(), gates::z()];
    std::array::from_fn(|k| {
        let (a, b) = ((k + 1) / 4, (k + 1) % 4);
        let m = crate::linalg::tensor(&one[a], &one[b]);
        M4::from_fn(|r, c| m.get(r, c))
    })
}

/// Nonzero entries `(row, col, value)` of each basis element; four per element.
struct SparseBasis {
    entries: [[(usize, usize, Complex64); 4]; GATE_PARAMS],
}

impl SparseBasis {
    fn new() -> Self {
        let dense = pauli_basis();
        let entries = std::array::from_fn(|k| {
            let mut out = [(0, 0, Complex64::new(0.0, 0.0)); 4];
            let mut n = 0;
            for r in 0..4 {
                for c in 0..4 {
                    let v = dense[k][(r, c)];
                    if v.norm() > 0.5 {
                        out[n] = (r, c, v);
                        n += 1;
                    }
                }
            }
            out
        });
        Self { entries }
    }

    fn hamiltonian(&self, p: &[f64]) -> M4 {
        let mut h = M4::zeros();
        for (k, &x) in p.iter().enumerate() {
            for &(r, c, v) in &self.entries[k] {
                h[(r, c)] += v * x;
            }
        }
        h
    }
}

/// Register index for (local pair index, spectator bit), per pair class.
fn index_tables() -> [[[usize; 4]; 2]; 3] {
    let mut t = [[[0; 4]; 2]; 3];
    for (pi, pair) in PairClass::ALL.into_iter().enumerate() {
        for x in 0..8 {
            t[pi][pair.spectator().bit(x)][pair.local_index(x)] = x;
        }
    }
    t
}

fn pair_slot(pair: PairClass) -> usize {
    match pair {
        PairClass::AB => 0,
        PairClass::AC => 1,
        PairClass::BC => 2,
    }
}

/// `exp(iH)` for Hermitian `H`, with the eigen data needed by the gradient.
struct GateExp {
    g: M4,
    v: M4,
    h: [f64; 4],
}

fn gate_exp(h: &M4) -> GateExp {
    if h.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return GateExp {
            g: M4::identity(),
            v: M4::identity(),
            h: [0.0; 4],
        };
    }
    let eig = h.symmetric_eigen();
    let v = eig.eigenvectors;
    let hv = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2], eig.eigenvalues[3]];
    let mut scaled = v;
    for c in 0..4 {
        let e = Complex64::from_polar(1.0, hv[c]);
        for r in 0..4 {
            scaled[(r, c)] *= e;
        }
    }
    GateExp {
        g: scaled * v.adjoint(),
        v,
        h: hv,
    }
}

/// Objective and gradient evaluator for one structure and target.
struct Model {
    slots: Vec<usize>,
    target_dagger: M8,
    basis: SparseBasis,
    tables: [[[usize; 4]; 2]; 3],
}

impl Model {
    fn new(target: &ComplexMatrix, structure: &StructureSignature) -> Self {
        let t = M8::from_fn(|r, c| target.get(r, c));
        Self {
            slots: structure.pairs.iter().map(|&p| pair_slot(p)).collect(),
            target_dagger: t.adjoint(),
            basis: SparseBasis::new(),
            tables: index_tables(),
        }
    }

    fn dim(&self) -> usize {
        GATE_PARAMS * self.slots.len()
    }

    /// `G · m` for the embedded gate.
    fn apply_left(&self, slot: usize, g: &M4, m: &M8) -> M8 {
        let tab = &self.tables[slot];
        let mut out = M8::zeros();
        for t in 0..2 {
            for l in 0..4 {
                let x = tab[t][l];
                for lp in 0..4 {
                    let coef = g[(l, lp)];
                    let y = tab[t][lp];
                    for c in 0..8 {
                        out[(x, c)] += coef * m[(y, c)];
                    }
                }
            }
        }
        out
    }

    /// `m · G` for the embedded gate.
    fn apply_right(&self, slot: usize, m: &M8, g: &M4) -> M8 {
        let tab = &self.tables[slot];
        let mut out = M8::zeros();
        for t in 0..2 {
            for l in 0..4 {
                let y = tab[t][l];
                for lp in 0..4 {
                    let coef = g[(lp, l)];
                    let x = tab[t][lp];
                    for r in 0..8 {
                        out[(r, y)] += m[(r, x)] * coef;
                    }
                }
            }
        }
        out
    }

    fn gates(&self, p: &[f64]) -> Vec<GateExp> {
        p.chunks(GATE_PARAMS)
            .map(|chunk| gate_exp(&self.basis.hamiltonian(chunk)))
            .collect()
    }

    /// `z = tr(T† U(p))`.
    fn overlap(&self, gates: &[GateExp]) -> Complex64 {
        let mut s = self.target_dagger;
        for (j, ge) in gates.iter().enumerate().rev() {
            s = self.apply_right(self.slots[j], &s, &ge.g);
        }
        s.trace()
    }

    /// Smooth objective `1 − |z|²/64`.
    fn value(&self, p: &[f64]) -> f64 {
        let z = self.overlap(&self.gates(p));
        1.0 - z.norm_sqr() / 64.0
    }

    fn value_and_gradient(&self, p: &[f64], grad: &mut [f64]) -> f64 {
        let gates = self.gates(p);
        let k = gates.len();
        // prefix[j] = G_j ⋯ G_1 (prefix[0] = I); suffix[j] = T† G_k ⋯ G_{j+1}.
        let mut prefix = Vec::with_capacity(k + 1);
        prefix.push(M8::identity());
        for (j, ge) in gates.iter().enumerate() {
            let next = self.apply_left(self.slots[j], &ge.g, &prefix[j]);
            prefix.push(next);
        }
        let mut suffix = vec![M8::zeros(); k + 1];
        suffix[k] = self.target_dagger;
        for j in (0..k).rev() {
            suffix[j] = self.apply_right(self.slots[j], &suffix[j + 1], &gates[j].g);
        }
        let z = suffix[0].trace();
        let zc = z.conj();

        for (j, ge) in gates.iter().enumerate() {
            // z = tr(E G_j) with E = prefix[j] · suffix[j+1]; reduce E onto the pair.
            let tab = &self.tables[self.slots[j]];
            let (pm, sm) = (&prefix[j], &suffix[j + 1]);
            let mut ered = M4::zeros();
            for s in 0..4 {
                for r in 0..4 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for t in 0..2 {
                        let (x, y) = (tab[t][s], tab[t][r]);
                        for m in 0..8 {
                            acc += pm[(x, m)] * sm[(m, y)];
                        }
                    }
                    ered[(s, r)] = acc;
                }
            }
            let mm = ge.v.adjoint() * ered * ge.v;
            let mut b = M4::zeros();
            for m in 0..4 {
                for n in 0..4 {
                    let f = divided_difference(ge.h[m], ge.h[n]);
                    b[(m, n)] = mm[(n, m)] * f;
                }
            }
            let c = ge.v * b.transpose() * ge.v.adjoint();
            for (kk, entries) in self.basis.entries.iter().enumerate() {
                let mut dz = Complex64::new(0.0, 0.0);
                for &(r, col, v) in entries {
                    dz += c[(col, r)] * v;
                }
                grad[j * GATE_PARAMS + kk] = -2.0 * (zc * dz).re / 64.0;
            }
        }
        1.0 - z.norm_sqr() / 64.0
    }

    fn circuit(&self, structure: &StructureSignature, p: &[f64]) -> Circuit {
        let gates = self
            .gates(p)
            .into_iter()
            .zip(&structure.pairs)
            .map(|(ge, &pair)| {
                let m = ComplexMatrix::from_fn(4, 4, |r, c| ge.g[(r, c)]);
                TwoQubitGate::new(pair, m, None).expect("exponential of a Hermitian matrix is unitary")
            })
            .collect();
        Circuit::new(gates)
    }
}

/// `(e^{ia} − e^{ib}) / (a − b)`, with `i e^{ia}` on the diagonal.
fn divided_difference(a: f64, b: f64) -> Complex64 {
    let half = (a - b) / 2.0;
    let sinc = if half.abs() < 1e-8 {
        1.0 - half * half / 6.0
    } else {
        half.sin() / half
    };
    Complex64::new(0.0, 1.0) * Complex64::from_polar(sinc, (a + b) / 2.0)
}

struct Run {
    params: Vec<f64>,
    iterations: usize,
    trajectory: Option<Vec<f64>>,
}

/// L-BFGS with Armijo backtracking; every accepted step decreases the objective.
fn lbfgs(model: &Model, start: Vec<f64>, cfg: &SearchConfig) -> Run {
    let n = start.len();
    let mut x = start;
    let mut g = vec![0.0; n];
    let mut f = model.value_and_gradient(&x, &mut g);
    let mut trajectory = cfg.record_trajectories.then(|| vec![f]);
    let mut history: std::collections::VecDeque<(Vec<f64>, Vec<f64>, f64)> = std::collections::VecDeque::new();
    let mut stalls = 0;
    let mut iterations = 0;
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

    while iterations < cfg.max_iterations && f > cfg.convergence_tol {
        let gnorm = dot(&g, &g).sqrt();
        if gnorm < 1e-14 {
            break;
        }
        // Two-loop recursion.
        let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut alphas = Vec::with_capacity(history.len());
        for (s, y, rho) in history.iter().rev() {
            let a = rho * dot(s, &d);
            for (di, yi) in d.iter_mut().zip(y) {
                *di -= a * yi;
            }
            alphas.push(a);
        }
        let gamma = match history.back() {
            Some((s, y, _)) => dot(s, y) / dot(y, y),
            None => 1.0 / gnorm.max(1.0),
        };
        for di in d.iter_mut() {
            *di *= gamma;
        }
        for ((s, y, rho), a) in history.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &d);
            for (di, si) in d.iter_mut().zip(s) {
                *di += (a - b) * si;
            }
        }
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            history.clear();
            d = g.iter().map(|v| -v / gnorm.max(1.0)).collect();
            slope = dot(&g, &d);
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..cfg.max_backtracks {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + step * di).collect();
            let ft = model.value(&trial);
            if ft <= f + cfg.armijo * step * slope && ft < f {
                accepted = Some((trial, ft));
                break;
            }
            step *= cfg.backtrack;
        }
        let Some((x_new, _)) = accepted else {
            break;
        };
        let mut g_new = vec![0.0; n];
        let f_new = model.value_and_gradient(&x_new, &mut g_new);
        iterations += 1;

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if history.len() == cfg.memory {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }
        let decrease = f - f_new;
        x = x_new;
        g = g_new;
        f = f_new;
        if let Some(t) = trajectory.as_mut() {
            t.push(f);
        }
        if decrease < cfg.convergence_tol {
            stalls += 1;
            if stalls >= 3 {
                break;
            }
        } else {
            stalls = 0;
        }
    }
    Run {
        params: x,
        iterations,
        trajectory,
    }
}

/// Hermitian `H` with `exp(iH) = g` up to phase, in Pauli coordinates.
pub fn gate_params(g: &ComplexMatrix) -> Result<Vec<f64>> {
    if g.shape() != (4, 4) {
        return Err(Error::dim("4x4", format!("{}x{}", g.rows(), g.cols())));
    }
    let eig = eig_unitary(g)?;
    let h = &(&eig.vectors * &ComplexMatrix::diag(&eig.phases().iter().map(|&p| Complex64::new(p, 0.0)).collect::<Vec<_>>()))
        * &eig.vectors.dagger();
    let hm = M4::from_fn(|r, c| h.get(r, c));
    Ok(pauli_basis().iter().map(|s| (s * hm).trace().re / 4.0).collect())
}

/// Parameters reproducing `circuit` up to phase, if its structure matches.
pub fn circuit_params(circuit: &Circuit) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(GATE_PARAMS * circuit.len());
    for g in circuit.gates() {
        out.extend(gate_params(g.matrix())?);
    }
    Ok(out)
}

/// Gate sequences of length `k` with no two equal neighbours, in
/// lexicographic order over `AB < AC < BC`.
pub fn enumerate_structures(k: usize) -> Vec<StructureSignature> {
    if k == 0 {
        return Vec::new();
    }
    let mut out: Vec<Vec<PairClass>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * 3);
        for prefix in &out {
            for p in PairClass::ALL {
                if prefix.last() != Some(&p) {
                    let mut v = prefix.clone();
                    v.push(p);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out.into_iter().map(StructureSignature::new).collect()
}

/// Random stream identifying a structure independent of enumeration order.
fn stream_id(structure: &StructureSignature, restart: usize) -> u64 {
    let code = structure
        .pairs
        .iter()
        .fold(0u64, |acc, &p| acc * 3 + pair_slot(p) as u64);
    ((structure.k() as u64) << 48) | (code << 20) | restart as u64
}

fn check_target(target: &ComplexMatrix) -> Result<()> {
    if target.shape() != (8, 8) {
        return Err(Error::dim("8x8", format!("{}x{}", target.rows(), target.cols())));
    }
    target.require_unitary(UNITARY_TOL)
}

/// Multi-start fit of `structure` to `target` from `restarts` random starts.
pub fn optimize_structure(target: &ComplexMatrix, structure: &StructureSignature, cfg: &SearchConfig) -> Result<SearchResult> {
    optimize_structure_with(target, structure, cfg, &[])
}

/// As [`optimize_structure`], with extra starting points run after the
/// random ones.
pub fn optimize_structure_with(
    target: &ComplexMatrix,
    structure: &StructureSignature,
    cfg: &SearchConfig,
    extra: &[(StartKind, Vec<f64>)],
) -> Result<SearchResult> {
    check_target(target)?;
    cfg.validate()?;
    if structure.k() == 0 {
        return Err(Error::InvalidConfig("structure must contain at least one gate".into()));
    }
    let model = Model::new(target, structure);
    let dim = model.dim();
    for (_, p) in extra {
        if p.len() != dim {
            return Err(Error::InvalidConfig(format!(
                "start has {} parameters, structure needs {dim}",
                p.len()
            )));
        }
    }

    let mut starts: Vec<(StartKind, Vec<f64>)> = (0..cfg.restarts)
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(stream_id(structure, r));
            (StartKind::Random, (0..dim).map(|_| rng.random_range(-PI..=PI)).collect())
        })
        .collect();
    starts.extend(extra.iter().cloned());

    let score = |p: &[f64]| -> (f64, Circuit) {
        let c = model.circuit(structure, p);
        let v = infidelity(&c.unitary(), target).expect("shapes checked");
        (v, c)
    };

    let mut per_restart = Vec::with_capacity(starts.len());
    let mut best: Option<(f64, Circuit, Vec<f64>)> = None;
    for (kind, start) in starts {
        let (v0, c0) = score(&start);
        let run = lbfgs(&model, start.clone(), cfg);
        let (v1, c1) = score(&run.params);
        // Keep the start if roundoff in the final evaluation made it look worse.
        let (value, circuit, params) = if v1 <= v0 { (v1, c1, run.params) } else { (v0, c0, start) };
        per_restart.push(RestartOutcome {
            kind,
            infidelity: value,
            iterations: run.iterations,
            trajectory: run.trajectory,
        });
        if best.as_ref().is_none_or(|(b, _, _)| value < *b) {
            best = Some((value, circuit, params));
        }
    }
    let (best_infidelity, best_circuit, best_params) = best.expect("at least one restart");
    Ok(SearchResult {
        structure: structure.clone(),
        best_infidelity,
        best_circuit,
        best_params,
        per_restart,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureSummary {
    pub pairs: Vec<PairClass>,
    pub best_infidelity: f64,
    pub restarts: Vec<f64>,
    pub iterations: Vec<usize>,
    pub starts: Vec<StartKind>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Thresholds {
    pub negative: f64,
    pub positive: f64,
    pub note: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimalityReport {
    pub target: String,
    /// Largest structure length searched.
    pub k: usize,
    pub seed: u64,
    pub restarts: usize,
    pub structures: Vec<StructureSummary>,
    /// `floors[k-1]`: least infidelity over all structures of length `k`.
    pub floors: Vec<f64>,
    /// Smallest `k` whose floor is below the positive threshold.
    pub fitted_at: Option<usize>,
    pub thresholds: Thresholds,
    pub verdict: String,
}

impl OptimalityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Searches every structure of length `1..=k_max` and records the
/// infidelity floor per length.
///
/// Circuits in `witnesses` become extra starts for the structure they match.
/// Each length-`k+1` structure also starts once from the best parameters of
/// its length-`k` prefix plus an identity gate, so floors cannot increase
/// with `k`.
pub fn optimality_evidence(
    target: &ComplexMatrix,
    name: &str,
    k_max: usize,
    cfg: &SearchConfig,
    witnesses: &[Circuit],
) -> Result<OptimalityReport> {
    if k_max > K_MAX_LIMIT {
        return Err(Error::CostGuard {
            k_max,
            limit: K_MAX_LIMIT,
        });
    }
    if k_max == 0 {
        return Err(Error::InvalidConfig("k_max must be at least 1".into()));
    }
    check_target(target)?;
    cfg.validate()?;

    let witness_params: Vec<(StructureSignature, Vec<f64>)> = witnesses
        .iter()
        .map(|w| Ok((w.signature(), circuit_params(w)?)))
        .collect::<Result<_>>()?;

    let mut structures = Vec::new();
    let mut floors = Vec::with_capacity(k_max);
    let mut previous: Vec<(StructureSignature, Vec<f64>)> = Vec::new();
    for k in 1..=k_max {
        let mut current = Vec::new();
        let mut floor = f64::INFINITY;
        for sig in enumerate_structures(k) {
            let mut extra: Vec<(StartKind, Vec<f64>)> = witness_params
                .iter()
                .filter(|(s, _)| *s == sig)
                .map(|(_, p)| (StartKind::Witness, p.clone()))
                .collect();
            let prefix = &sig.pairs[..k - 1];
            if let Some((_, p)) = previous.iter().find(|(s, _)| s.pairs == prefix) {
                let mut seed = p.clone();
                seed.extend([0.0; GATE_PARAMS]);
                extra.push((StartKind::Extension, seed));
            }
            let res = optimize_structure_with(target, &sig, cfg, &extra)?;
            floor = floor.min(res.best_infidelity);
            structures.push(StructureSummary {
                pairs: sig.pairs.clone(),
                best_infidelity: res.best_infidelity,
                restarts: res.per_restart.iter().map(|r| r.infidelity).collect(),
                iterations: res.iterations_used(),
                starts: res.per_restart.iter().map(|r| r.kind).collect(),
            });
            current.push((sig, res.best_params));
        }
        floors.push(floor);
        previous = current;
    }

    let fitted_at = floors.iter().position(|&f| f < POSITIVE_THRESHOLD).map(|i| i + 1);
    let below = fitted_at.unwrap_or(k_max + 1) - 1;
    let all_negative = floors[..below].iter().all(|&f| f > NEGATIVE_THRESHOLD);
    let verdict = match fitted_at {
        Some(k) => format!(
            "empirical evidence: fitted with {k} gate(s) (floor < {POSITIVE_THRESHOLD:e}); floors for k < {k} {} {NEGATIVE_THRESHOLD:e}. Thresholds are empirical conventions; this is not a proof.",
            if all_negative { "all exceed" } else { "do not all exceed" }
        ),
        None => format!(
            "empirical evidence: no fit up to {k_max} gate(s); floors {} {NEGATIVE_THRESHOLD:e}. Thresholds are empirical conventions; this is not a proof.",
            if all_negative { "all exceed" } else { "do not all exceed" }
        ),
    };

    Ok(OptimalityReport {
        target: name.to_string(),
        k: k_max,
        seed: cfg.seed,
        restarts: cfg.restarts,
        structures,
        floors,
        fitted_at,
        thresholds: Thresholds {
            negative: NEGATIVE_THRESHOLD,
            positive: POSITIVE_THRESHOLD,
            note: "empirical conventions, not derived bounds",
        },
        verdict,
    })
}
