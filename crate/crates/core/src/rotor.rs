//! Physical layer: asymmetric-top spectrum and eigenvectors, dipole matrix
//! elements, and the resonance-restricted physical drive matrices.
//!
//! The working basis is the symmetric-top basis |J,K⟩ quantized along the
//! molecular a-axis (the representation in which the rotor Hamiltonian
//! couples |ΔK| = 2); the a/b/c dipole components then enter the x/y/z
//! lab-frame operators through the rank-1 rotation matrix elements. See the
//! README for the axis and phase conventions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::exact::{wigner3j, ThreeJArgs};
use crate::oplib::{subsystem_dim, Block, StateIndex};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RotorError {
    #[error("rotational constants must satisfy A > B > C > 0, got A={0} B={1} C={2}")]
    BadConstants(f64, f64, f64),
    #[error("eigensolver failed for J={0}")]
    EigenFailure(u32),
    #[error("tau index {tau} outside −{j}..{j}")]
    TauOutOfRange { j: i64, tau: i64 },
    #[error("subsystem must pick two distinct upper levels")]
    DegenerateUpperLevels,
    #[error(
        "no dipole-active subsystem found at J={0}: every candidate level pair \
         has an identically zero drive for the requested components"
    )]
    NoActiveSubsystem(u32),
}

/// Rotational constants with the asymmetric-top ordering `A > B > C > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotationalConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl RotationalConstants {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, RotorError> {
        if !(a > b && b > c && c > 0.0) {
            return Err(RotorError::BadConstants(a, b, c));
        }
        Ok(Self { a, b, c })
    }
}

/// Energies and eigenvectors of one J manifold.
///
/// Levels are sorted by energy and labeled `τ = −J..J`; eigenvector signs are
/// fixed so the first nonzero K-coefficient is positive, which makes the
/// coefficients reproducible across platforms.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub j: u32,
    /// Energies ascending, index `τ + J`.
    pub energies: Vec<f64>,
    /// Column `τ + J` holds the coefficients c_K over K = −J..J.
    pub coefficients: DMatrix<f64>,
}

impl EigenDecomposition {
    /// Coefficient c_K(τ) with `τ, K` in signed convention.
    pub fn c(&self, tau: i64, k: i64) -> f64 {
        let j = i64::from(self.j);
        self.coefficients[((k + j) as usize, (tau + j) as usize)]
    }

    pub fn energy(&self, tau: i64) -> f64 {
        self.energies[(tau + i64::from(self.j)) as usize]
    }
}

/// Rotor Hamiltonian in the |J,K⟩ basis: diagonal plus |ΔK| = 2 couplings.
///
/// With the quantization axis along a:
/// `H = A·K² + (B+C)/2·(J(J+1) − K²)` on the diagonal and
/// `(B−C)/4·√((J(J+1)−K(K±1))(J(J+1)−(K±1)(K±2)))` on the |ΔK| = 2
/// off-diagonals.
pub fn build_h0_symtop(j: u32, constants: &RotationalConstants) -> DMatrix<f64> {
    let n = (2 * j + 1) as usize;
    let jj = f64::from(j) * (f64::from(j) + 1.0);
    let mut h = DMatrix::<f64>::zeros(n, n);
    let bc_half = 0.5 * (constants.b + constants.c);
    let bc_quarter = 0.25 * (constants.b - constants.c);
    for idx in 0..n {
        let k = idx as i64 - i64::from(j);
        let kf = k as f64;
        h[(idx, idx)] = bc_half * (jj - kf * kf) + constants.a * kf * kf;
        if idx + 2 < n {
            let kp = kf + 1.0;
            let elem = bc_quarter
                * ((jj - kf * kp) * (jj - kp * (kp + 1.0))).sqrt();
            h[(idx, idx + 2)] = elem;
            h[(idx + 2, idx)] = elem;
        }
    }
    h
}

/// Diagonalizes one J manifold with deterministic ordering and sign fixing.
pub fn diagonalize(j: u32, constants: &RotationalConstants) -> Result<EigenDecomposition, RotorError> {
    let h = build_h0_symtop(j, constants);
    let n = h.nrows();
    let eig = nalgebra::SymmetricEigen::try_new(h, 1e-14, 0)
        .ok_or(RotorError::EigenFailure(j))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].partial_cmp(&eig.eigenvalues[y]).unwrap());
    let mut energies = Vec::with_capacity(n);
    let mut coefficients = DMatrix::<f64>::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        energies.push(eig.eigenvalues[src]);
        let mut v: DVector<f64> = eig.eigenvectors.column(src).into();
        if let Some(first) = v.iter().find(|x| x.abs() > 1e-10) {
            if *first < 0.0 {
                v.neg_mut();
            }
        }
        coefficients.set_column(col, &v);
    }
    Ok(EigenDecomposition { j, energies, coefficients })
}

/// Lab-frame polarization of a driving field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Polarization {
    X,
    Y,
    Z,
}

impl Polarization {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "x" | "X" => Some(Self::X),
            "y" | "Y" => Some(Self::Y),
            "z" | "Z" => Some(Self::Z),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::X => "x",
            Self::Y => "y",
            Self::Z => "z",
        }
    }
}

/// Which transition frequency a field is resonant with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Resonance {
    /// `ω₁ = |E_{J+1,τ′} − E_{J,τ}|`, coupling the τ and τ′ blocks.
    Omega1,
    /// `ω₂ = |E_{J+1,τ″} − E_{J,τ}|`, coupling the τ and τ″ blocks.
    Omega2,
}

/// Choice of the three-level subsystem within the J and J+1 manifolds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubsystemSpec {
    pub j: u32,
    /// Lower level, `τ ∈ −J..J`.
    pub tau: i64,
    /// Upper levels, `τ′, τ″ ∈ −(J+1)..J+1`, distinct.
    pub tau_p: i64,
    pub tau_pp: i64,
    /// Molecule-frame dipole components `(μ_a, μ_b, μ_c)`.
    pub dipole: [f64; 3],
}

impl SubsystemSpec {
    pub fn new(
        j: u32,
        tau: i64,
        tau_p: i64,
        tau_pp: i64,
        dipole: [f64; 3],
    ) -> Result<Self, RotorError> {
        let jl = i64::from(j);
        if tau.abs() > jl {
            return Err(RotorError::TauOutOfRange { j: jl, tau });
        }
        for t in [tau_p, tau_pp] {
            if t.abs() > jl + 1 {
                return Err(RotorError::TauOutOfRange { j: jl + 1, tau: t });
            }
        }
        if tau_p == tau_pp {
            return Err(RotorError::DegenerateUpperLevels);
        }
        Ok(Self { j, tau, tau_p, tau_pp, dipole })
    }
}

/// Coefficients of the rank-1 rotation matrix elements `D¹_{p,q}` in the
/// lab-frame dipole operator `μ̂_pol`, indexed by `(p+1, q+1)`.
fn dipole_projection(pol: Polarization, dipole: [f64; 3]) -> [[Complex64; 3]; 3] {
    let [mu_a, mu_b, mu_c] = dipole;
    let i = Complex64::new(0.0, 1.0);
    let r = |x: f64| Complex64::new(x, 0.0);
    let mut c = [[Complex64::new(0.0, 0.0); 3]; 3];
    let sqrt2 = 2.0f64.sqrt();
    // index helpers: p,q ∈ {−1,0,1} stored at p+1, q+1
    let (m1, z0, p1) = (0usize, 1usize, 2usize);
    match pol {
        Polarization::X => {
            c[m1][z0] += r(mu_a / sqrt2);
            c[p1][z0] -= r(mu_a / sqrt2);
            c[p1][p1] += r(mu_b / 2.0);
            c[p1][m1] -= r(mu_b / 2.0);
            c[m1][p1] -= r(mu_b / 2.0);
            c[m1][m1] += r(mu_b / 2.0);
            c[p1][p1] -= i * (mu_c / 2.0);
            c[p1][m1] -= i * (mu_c / 2.0);
            c[m1][p1] += i * (mu_c / 2.0);
            c[m1][m1] += i * (mu_c / 2.0);
        }
        Polarization::Y => {
            c[m1][z0] -= i * (mu_a / sqrt2);
            c[p1][z0] -= i * (mu_a / sqrt2);
            c[p1][p1] += i * (mu_b / 2.0);
            c[p1][m1] -= i * (mu_b / 2.0);
            c[m1][p1] += i * (mu_b / 2.0);
            c[m1][m1] -= i * (mu_b / 2.0);
            c[p1][p1] += r(mu_c / 2.0);
            c[p1][m1] += r(mu_c / 2.0);
            c[m1][p1] += r(mu_c / 2.0);
            c[m1][m1] += r(mu_c / 2.0);
        }
        Polarization::Z => {
            c[z0][z0] += r(mu_a);
            c[z0][p1] -= r(mu_b / sqrt2);
            c[z0][m1] += r(mu_b / sqrt2);
            c[z0][p1] += i * (mu_c / sqrt2);
            c[z0][m1] += i * (mu_c / sqrt2);
        }
    }
    c
}

/// 3j value as f64, exact zero included.
fn w3j_f64(j1: u32, j2: u32, j3: u32, m1: i64, m2: i64, m3: i64) -> f64 {
    match ThreeJArgs::new(j1, j2, j3, m1, m2, m3) {
        Ok(args) => wigner3j(&args).to_f64(),
        Err(_) => 0.0,
    }
}

/// Matrix element `⟨J″,τ″,M″| −μ̂_pol |J′,τ′,M′⟩` of the dipole interaction.
///
/// Assembled from the lab-frame projection of the molecule-frame dipole, the
/// asymmetric-top expansion over |J,K⟩, and the product of two 3j symbols
/// with the `√(2J″+1)√(2J′+1)(−1)^(M″+K″)` prefactor. Selection-rule
/// violations (|ΔJ| > 1 or a polarization-incompatible ΔM) return the exact
/// complex zero.
#[allow(clippy::too_many_arguments)]
pub fn dipole_element(
    bra: (&EigenDecomposition, i64, i64),
    ket: (&EigenDecomposition, i64, i64),
    pol: Polarization,
    dipole: [f64; 3],
) -> Complex64 {
    let (dec_bra, tau_bra, m_bra) = bra;
    let (dec_ket, tau_ket, m_ket) = ket;
    let (j_bra, j_ket) = (dec_bra.j, dec_ket.j);
    let zero = Complex64::new(0.0, 0.0);

    if j_bra.abs_diff(j_ket) > 1 {
        return zero;
    }
    let dm = m_bra - m_ket; // lab index p of the contributing D¹ term
    if dm.abs() > 1 {
        return zero;
    }
    match pol {
        Polarization::Z if dm != 0 => return zero,
        Polarization::X | Polarization::Y if dm == 0 => return zero,
        _ => {}
    }

    let coeffs = dipole_projection(pol, dipole);
    let prefactor = ((2 * j_bra + 1) as f64 * (2 * j_ket + 1) as f64).sqrt();
    let m_3j = w3j_f64(j_ket, 1, j_bra, m_ket, dm, -m_bra);
    if m_3j == 0.0 {
        return zero;
    }
    let m_phase = if m_bra.rem_euclid(2) == 1 { -1.0 } else { 1.0 };

    let mut k_sum = Complex64::new(0.0, 0.0);
    for q in -1i64..=1 {
        let cq = coeffs[(dm + 1) as usize][(q + 1) as usize];
        if cq == zero {
            continue;
        }
        let mut s = 0.0;
        for k_ket in -i64::from(j_ket)..=i64::from(j_ket) {
            let k_bra = k_ket + q;
            if k_bra.abs() > i64::from(j_bra) {
                continue;
            }
            let k_3j = w3j_f64(j_ket, 1, j_bra, k_ket, q, -k_bra);
            if k_3j == 0.0 {
                continue;
            }
            let k_phase = if k_bra.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
            s += dec_ket.c(tau_ket, k_ket) * dec_bra.c(tau_bra, k_bra) * k_phase * k_3j;
        }
        k_sum += cq * s;
    }
    // −μ̂ per the interaction sign convention
    -(prefactor * m_phase * m_3j) * k_sum
}

/// Diagonal phase gauge applied to the subsystem basis so that physical
/// drives reproduce the structural sign patterns.
///
/// The |J,τ,M⟩ phases are a convention; this library fixes them as
/// `(−i)^M` on the τ block, `(−i)^(M−1)` on τ′ and `(−i)^(M+1)` on τ″, which
/// aligns each dipole drive with its prefactor-free structural counterpart up
/// to a single complex constant.
fn gauge_phase(state: &StateIndex) -> Complex64 {
    let exponent = match state.block {
        Block::Tau => state.m,
        Block::TauPrime => state.m - 1,
        Block::TauDoublePrime => state.m + 1,
    };
    // (−i)^exponent
    match exponent.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// The dipole operator of one field, restricted to the level pair selected by
/// its resonance, as a Hermitian matrix on the 6J+7 subsystem basis.
///
/// All blocks other than the resonant pair are exactly zero, and the matrix
/// is Hermitian by construction (each element is written with its conjugate).
pub fn build_physical_drive(
    spec: &SubsystemSpec,
    resonance: Resonance,
    pol: Polarization,
    lower: &EigenDecomposition,
    upper: &EigenDecomposition,
) -> Result<DMatrix<Complex64>, RotorError> {
    assert_eq!(lower.j, spec.j);
    assert_eq!(upper.j, spec.j + 1);
    let n = subsystem_dim(spec.j) as usize;
    let (upper_block, upper_tau) = match resonance {
        Resonance::Omega1 => (Block::TauPrime, spec.tau_p),
        Resonance::Omega2 => (Block::TauDoublePrime, spec.tau_pp),
    };
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    let ju = i64::from(spec.j) + 1;
    for m_low in -i64::from(spec.j)..=i64::from(spec.j) {
        for m_up in -ju..=ju {
            let elem = dipole_element(
                (upper, upper_tau, m_up),
                (lower, spec.tau, m_low),
                pol,
                spec.dipole,
            );
            if elem == Complex64::new(0.0, 0.0) {
                continue;
            }
            let low_state = StateIndex::new(Block::Tau, m_low);
            let up_state = StateIndex::new(upper_block, m_up);
            let row = up_state.flat(spec.j).expect("upper state in range") as usize;
            let col = low_state.flat(spec.j).expect("lower state in range") as usize;
            let gauged =
                gauge_phase(&up_state) * elem * gauge_phase(&low_state).conj();
            h[(row, col)] = gauged;
            h[(col, row)] = gauged.conj();
        }
    }
    Ok(h)
}

/// Every level pair couples through exactly one molecule-frame dipole
/// component, fixed by the symmetry species of the two levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DipoleChannel {
    A,
    B,
    C,
    /// All three probe components vanished: the pair is dipole-dark.
    None,
}

/// Determines which dipole component connects `(J,τ)` to `(J+1,τ_up)` by
/// probing each component in isolation.
pub fn dipole_channel(
    lower: &EigenDecomposition,
    upper: &EigenDecomposition,
    tau: i64,
    tau_up: i64,
) -> DipoleChannel {
    let probes = [
        (DipoleChannel::A, [1.0, 0.0, 0.0], Polarization::Z),
        (DipoleChannel::B, [0.0, 1.0, 0.0], Polarization::Z),
        (DipoleChannel::C, [0.0, 0.0, 1.0], Polarization::Z),
    ];
    let jl = i64::from(lower.j);
    for (channel, mu, pol) in probes {
        let mut norm = 0.0;
        for m in -jl..=jl {
            norm += dipole_element((upper, tau_up, m), (lower, tau, m), pol, mu).norm_sqr();
            // z probes miss nothing here: activity is a property of the level
            // pair, not of the polarization, but guard with an x probe too.
            norm += dipole_element((upper, tau_up, m + 1), (lower, tau, m), Polarization::X, mu)
                .norm_sqr();
        }
        if norm > 1e-20 {
            return channel;
        }
    }
    DipoleChannel::None
}

/// Scans the J / J+1 manifolds for a subsystem matching the structural drive
/// assignment: the τ↔τ′ pair must couple through μ_c (driven by the x/y
/// fields at ω₁) and the τ↔τ″ pair through μ_a (the y/z fields at ω₂).
///
/// Returns the first admissible `(τ, τ′, τ″)` in lexicographic order; if none
/// exists the error reports that every candidate drive was identically zero.
pub fn select_active_subsystem(
    j: u32,
    constants: &RotationalConstants,
    dipole: [f64; 3],
) -> Result<SubsystemSpec, RotorError> {
    let lower = diagonalize(j, constants)?;
    let upper = diagonalize(j + 1, constants)?;
    let jl = i64::from(j);
    let ju = jl + 1;
    for tau in -jl..=jl {
        for tau_p in -ju..=ju {
            if dipole_channel(&lower, &upper, tau, tau_p) != DipoleChannel::C {
                continue;
            }
            for tau_pp in -ju..=ju {
                if tau_pp == tau_p {
                    continue;
                }
                if dipole_channel(&lower, &upper, tau, tau_pp) == DipoleChannel::A {
                    return SubsystemSpec::new(j, tau, tau_p, tau_pp, dipole);
                }
            }
        }
    }
    Err(RotorError::NoActiveSubsystem(j))
}
