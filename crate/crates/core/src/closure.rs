//! Numerical Lie-closure engine.
//!
//! Given anti-Hermitian generators, the engine maintains a Frobenius-
//! orthonormal basis of the algebra they generate: every pair of basis
//! elements is queued in deterministic order, its matrix commutator is
//! projected out of the current span, and the normalized residual is appended
//! when its norm clears the tolerance. Anti-Hermitian matrices form a *real*
//! vector space, so the inner product is `⟨A,B⟩ = Re tr(A†B)` and the
//! resulting dimension count compares against `dim su(n) = n² − 1`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::oplib::{subsystem_dim, DriftSpec};
use crate::rotor::{self, Polarization, RotationalConstants};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClosureError {
    #[error("generator {index} is not anti-Hermitian (deviation {deviation:.3e})")]
    NotAntiHermitian { index: usize, deviation: f64 },
    #[error("generator {0} has dimension {1}, expected {2}")]
    DimensionMismatch(usize, usize, usize),
    #[error("no generators supplied")]
    Empty,
    #[error("rotor error: {0}")]
    Rotor(#[from] rotor::RotorError),
}

/// Options for a closure run.
#[derive(Debug, Clone)]
pub struct ClosureOptions {
    /// Residual-norm acceptance threshold relative to unit-norm basis
    /// elements.
    pub tolerance: f64,
    /// Cap on the number of commutators projected before giving up.
    pub max_commutators: usize,
    /// Worker threads for speculative commutator evaluation. Acceptance stays
    /// serialized in queue order, so results are identical for any value.
    pub threads: usize,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        Self { tolerance: 1e-9, max_commutators: 2_000_000, threads: 1 }
    }
}

/// Frobenius-orthonormal basis of the generated algebra.
pub struct LieBasis {
    pub n: usize,
    pub tolerance: f64,
    pub elements: Vec<DMatrix<Complex64>>,
}

impl LieBasis {
    /// Norm of the component of `a` orthogonal to the span.
    pub fn projection_residual(&self, a: &DMatrix<Complex64>) -> f64 {
        let mut v = flatten(a);
        let norm = vec_norm(&v);
        if norm == 0.0 {
            return 0.0;
        }
        scale(&mut v, 1.0 / norm);
        let flats: Vec<Vec<Complex64>> =
            self.elements.iter().map(flatten).collect();
        for _ in 0..2 {
            for b in &flats {
                let c = re_dot(b, &v);
                axpy(&mut v, -c, b);
            }
        }
        vec_norm(&v)
    }
}

/// Outcome of a closure run.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ClosureReport {
    pub schema: u32,
    pub n: usize,
    pub generated_dimension: usize,
    pub target_dimension: usize,
    /// Number of commutators projected against the basis.
    pub iterations: usize,
    /// Largest rejected projection norms (up to 16, descending): the numerical
    /// margin between the generated algebra and its complement.
    pub residual_spectrum: Vec<f64>,
    /// Frobenius norms of the trace parts removed from the generators.
    pub removed_trace_norms: Vec<f64>,
    /// Set when the commutator budget ran out before the queue drained.
    pub budget_exhausted: bool,
}

impl ClosureReport {
    pub fn is_full_rank(&self) -> bool {
        self.generated_dimension == self.target_dimension && !self.budget_exhausted
    }
}

fn flatten(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    m.iter().copied().collect()
}

fn re_dot(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum()
}

fn vec_norm(a: &[Complex64]) -> f64 {
    re_dot(a, a).sqrt()
}

fn scale(a: &mut [Complex64], s: f64) {
    for x in a.iter_mut() {
        *x *= s;
    }
}

fn axpy(y: &mut [Complex64], a: f64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

struct Span {
    flats: Vec<Vec<Complex64>>,
    mats: Vec<DMatrix<Complex64>>,
}

impl Span {
    /// Two-pass Gram–Schmidt projection. The input is *not* normalized first:
    /// the residual norm is meaningful on the scale of the input, so a
    /// commutator that is zero up to floating-point noise yields a residual
    /// of that same noise size instead of being amplified into a spurious
    /// unit direction.
    fn project(&self, m: &DMatrix<Complex64>) -> (Vec<Complex64>, f64) {
        let mut v = flatten(m);
        for _ in 0..2 {
            for b in &self.flats {
                let c = re_dot(b, &v);
                if c != 0.0 {
                    axpy(&mut v, -c, b);
                }
            }
        }
        let res = vec_norm(&v);
        (v, res)
    }

    /// Normalizes an accepted residual and runs one more projection sweep on
    /// it: normalization can amplify the leftover Gram–Schmidt error of a
    /// barely-accepted residual, and the extra sweep keeps the stored basis
    /// orthonormal to working precision.
    fn push(&mut self, mut flat: Vec<Complex64>, res: f64, n: usize) {
        scale(&mut flat, 1.0 / res);
        for _ in 0..2 {
            for b in &self.flats {
                let c = re_dot(b, &flat);
                if c != 0.0 {
                    axpy(&mut flat, -c, b);
                }
            }
        }
        let norm = vec_norm(&flat);
        scale(&mut flat, 1.0 / norm);
        let mat = DMatrix::from_iterator(n, n, flat.iter().copied());
        self.flats.push(flat);
        self.mats.push(mat);
    }
}

fn commutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a * b - b * a
}

/// Computes the dimension of the Lie algebra generated by `generators`.
///
/// Generators must be anti-Hermitian to 1e−10 relative to their norm; trace
/// parts are projected out and reported (the identity direction is
/// dynamically irrelevant).
pub fn lie_closure(
    generators: &[DMatrix<Complex64>],
    opts: &ClosureOptions,
) -> Result<(ClosureReport, LieBasis), ClosureError> {
    if generators.is_empty() {
        return Err(ClosureError::Empty);
    }
    let n = generators[0].nrows();
    let target = n * n - 1;

    let mut removed_trace_norms = Vec::new();
    let mut cleaned = Vec::with_capacity(generators.len());
    for (i, g) in generators.iter().enumerate() {
        if g.nrows() != n || g.ncols() != n {
            return Err(ClosureError::DimensionMismatch(i, g.nrows(), n));
        }
        let scale_norm = g.norm().max(1e-300);
        let dev = (g + g.adjoint()).norm() / scale_norm;
        if dev > 1e-10 {
            return Err(ClosureError::NotAntiHermitian { index: i, deviation: dev });
        }
        let tr = g.trace() / Complex64::new(n as f64, 0.0);
        let mut m = g.clone();
        for d in 0..n {
            m[(d, d)] -= tr;
        }
        removed_trace_norms.push((tr * Complex64::new(n as f64, 0.0)).norm());
        cleaned.push(m);
    }

    // Seed with unit-normalized generators so the tolerance is scale-free.
    let mut span = Span { flats: Vec::new(), mats: Vec::new() };
    for m in &cleaned {
        let norm = m.norm();
        if norm == 0.0 {
            continue;
        }
        let unit = m / Complex64::new(norm, 0.0);
        let (flat, res) = span.project(&unit);
        if res > opts.tolerance {
            span.push(flat, res, n);
        }
    }

    // Deterministic work queue: pair (i, j), i < j, enqueued as elements are
    // accepted. `next` tracks the first unprocessed pair in lexicographic
    // (j, i) order of acceptance.
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let enqueue_upto = |pairs: &mut Vec<(usize, usize)>, len: usize, from: usize| {
        for k in from..len {
            for i in 0..k {
                pairs.push((i, k));
            }
        }
    };
    enqueue_upto(&mut pairs, span.mats.len(), 0);

    let mut iterations = 0usize;
    let mut rejected: Vec<f64> = Vec::new();
    let mut budget_exhausted = false;
    let chunk = if opts.threads > 1 { 64 * opts.threads } else { 1 };
    let mut cursor = 0usize;

    while cursor < pairs.len() && span.mats.len() < target {
        if iterations >= opts.max_commutators {
            budget_exhausted = true;
            break;
        }
        let end = (cursor + chunk).min(pairs.len());
        let batch: Vec<DMatrix<Complex64>> = if opts.threads > 1 {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(opts.threads)
                .build()
                .expect("thread pool");
            let mats = &span.mats;
            pool.install(|| {
                pairs[cursor..end]
                    .par_iter()
                    .map(|&(i, j)| commutator(&mats[i], &mats[j]))
                    .collect()
            })
        } else {
            pairs[cursor..end]
                .iter()
                .map(|&(i, j)| commutator(&span.mats[i], &span.mats[j]))
                .collect()
        };
        // Acceptance is serialized in queue order regardless of thread count.
        for c in batch {
            if span.mats.len() >= target || iterations >= opts.max_commutators {
                break;
            }
            iterations += 1;
            cursor += 1;
            let (flat, res) = span.project(&c);
            if res > opts.tolerance {
                let prev_len = span.mats.len();
                span.push(flat, res, n);
                enqueue_upto(&mut pairs, prev_len + 1, prev_len);
            } else if res > 0.0 {
                rejected.push(res);
            }
        }
        if iterations >= opts.max_commutators && cursor < pairs.len() {
            budget_exhausted = true;
        }
    }

    rejected.sort_by(|a, b| b.partial_cmp(a).unwrap());
    rejected.truncate(16);

    let report = ClosureReport {
        schema: 1,
        n,
        generated_dimension: span.mats.len(),
        target_dimension: target,
        iterations,
        residual_spectrum: rejected,
        removed_trace_norms,
        budget_exhausted,
    };
    let basis = LieBasis { n, tolerance: opts.tolerance, elements: span.mats };
    Ok((report, basis))
}

/// Physical-layer parameters used when a polarization choice other than the
/// canonical `(x, y, y, z)` forces the generators through the dipole matrix
/// elements.
#[derive(Debug, Clone)]
pub struct PhysicalDriveConfig {
    pub constants: RotationalConstants,
    pub dipole: [f64; 3],
    /// Explicit `(τ, τ′, τ″)`; scanned automatically when absent.
    pub subsystem: Option<(i64, i64, i64)>,
}

impl Default for PhysicalDriveConfig {
    fn default() -> Self {
        Self {
            constants: RotationalConstants::new(1.0, 0.6, 0.2).expect("defaults valid"),
            dipole: [1.0, 1.0, 1.0],
            subsystem: None,
        }
    }
}

/// Assembles the five generators for a polarization choice
/// `(p₁, p₂ @ ω₁; p₃, p₄ @ ω₂)` and checks whether they generate all of
/// su(6J+7).
///
/// The canonical proven choice `(x, y, y, z)` uses the exact structural
/// drives; any other choice is built from the physical dipole drives, so that
/// arbitrary polarization sets can be probed.
pub fn full_rank_check(
    j: u32,
    drift: &DriftSpec,
    polarizations: [Polarization; 4],
    opts: &ClosureOptions,
    physical: &PhysicalDriveConfig,
) -> Result<(bool, ClosureReport), ClosureError> {
    let generators = generators_for(j, drift, polarizations, physical)?;
    let (report, _) = lie_closure(&generators, opts)?;
    Ok((report.is_full_rank(), report))
}

/// The generator set `{iH₀ traceless, iH_{ω₁,p₁}, iH_{ω₁,p₂}, iH_{ω₂,p₃},
/// iH_{ω₂,p₄}}` as dense matrices.
pub fn generators_for(
    j: u32,
    drift: &DriftSpec,
    polarizations: [Polarization; 4],
    physical: &PhysicalDriveConfig,
) -> Result<Vec<DMatrix<Complex64>>, ClosureError> {
    use Polarization::*;
    if polarizations == [X, Y, Y, Z] {
        return Ok(crate::drives::canonical_generators(j, drift));
    }

    let spec = match physical.subsystem {
        Some((tau, tau_p, tau_pp)) => {
            rotor::SubsystemSpec::new(j, tau, tau_p, tau_pp, physical.dipole)?
        }
        None => rotor::select_active_subsystem(j, &physical.constants, physical.dipole)?,
    };
    let lower = rotor::diagonalize(j, &physical.constants)?;
    let upper = rotor::diagonalize(j + 1, &physical.constants)?;
    let mut gens = vec![drift.drift_dense_traceless(j)];
    for (idx, p) in polarizations.into_iter().enumerate() {
        let resonance = if idx < 2 { rotor::Resonance::Omega1 } else { rotor::Resonance::Omega2 };
        let h = rotor::build_physical_drive(&spec, resonance, p, &lower, &upper)?;
        gens.push(h.map(|z| Complex64::new(0.0, 1.0) * z));
    }
    let n = subsystem_dim(j) as usize;
    debug_assert!(gens.iter().all(|g| g.nrows() == n));
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RadicalNumber;
    use crate::oplib::{ExactOperator, Kind, PauliElement};

    fn single(dim: u32, kind: Kind, j: u32, k: u32) -> DMatrix<Complex64> {
        let (e, _) = PauliElement::canonical(kind, j, k).unwrap();
        ExactOperator::single(dim, e, RadicalNumber::one()).to_dense()
    }

    #[test]
    fn two_level_system_closes_to_su2() {
        let gens = vec![single(2, Kind::G, 0, 1), single(2, Kind::D, 0, 1)];
        let (report, _) = lie_closure(&gens, &ClosureOptions::default()).unwrap();
        assert_eq!(report.generated_dimension, 3);
        assert_eq!(report.target_dimension, 3);
        assert!(report.is_full_rank());
    }

    #[test]
    fn commuting_generators_stay_two_dimensional() {
        let gens = vec![single(4, Kind::G, 0, 1), single(4, Kind::G, 2, 3)];
        let (report, _) = lie_closure(&gens, &ClosureOptions::default()).unwrap();
        assert_eq!(report.generated_dimension, 2);
        assert!(!report.is_full_rank());
    }

    #[test]
    fn non_anti_hermitian_input_rejected() {
        let mut g = single(2, Kind::G, 0, 1);
        g[(0, 1)] = Complex64::new(2.0, 0.0); // breaks anti-Hermiticity
        assert!(matches!(
            lie_closure(&[g], &ClosureOptions::default()),
            Err(ClosureError::NotAntiHermitian { .. })
        ));
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let gens = crate::drives::canonical_generators(1, &DriftSpec::default_spacing());
        let opts = ClosureOptions { max_commutators: 5, ..Default::default() };
        let (report, _) = lie_closure(&gens, &opts).unwrap();
        assert!(report.budget_exhausted);
        assert!(report.generated_dimension < report.target_dimension);
    }
}
