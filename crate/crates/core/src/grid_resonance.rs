//! Position-grid representation: genuine L² hermiticity checks for the
//! operators whose number-basis matrices disguise their adjoints, and the
//! complex-scaling route to the resonance ladder `±iΩ(n+½)`.
//!
//! The self-adjoint grid truncation of the bare inverted well has purely
//! real numerical eigenvalues; the imaginary ladder only appears after
//! rotating `x → e^{iθ}x`. At `θ = ∓π/4` the rotation maps the inverted
//! well exactly onto `±i` times a harmonic oscillator, which makes the
//! check rigorous and reduces it to a real symmetric eigensolve.

use crate::error::{Error, Result};
use crate::fock_ops::{Basis, TruncatedOperator};
use crate::model::{self, ModelParams, Regime};
use crate::spectra;
use faer::Mat;
use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_4;

/// Finite-difference stencil order for the derivative operators.
///
/// The fourth-order stencil is the default: at the reference resonance
/// grid (801 points on [−12, 12]) the second-order one leaves the n=4
/// deviation at 1.15e−3, outside the 1e−3 budget the resonance checks run
/// under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiffScheme {
    Order2,
    #[default]
    Order4,
}

/// Uniform position grid with a complex-scaling angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    /// Complex-scaling angle in radians, `|theta| ≤ π/2`.
    pub theta: f64,
    pub scheme: DiffScheme,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, points: usize, theta: f64) -> Result<Self> {
        let spec = Self { x_min, x_max, points, theta, scheme: DiffScheme::default() };
        spec.validate()?;
        Ok(spec)
    }

    /// The reference grid: [−12, 12] with 801 points, resolving the first
    /// several scaled eigenfunctions against the dense-solver budget.
    pub fn reference(theta: f64) -> Result<Self> {
        Self::new(-12.0, 12.0, 801, theta)
    }

    pub fn with_scheme(mut self, scheme: DiffScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min < self.x_max) {
            return Err(Error::InvalidConfig(format!(
                "grid needs x_min < x_max, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        if self.points < 64 {
            return Err(Error::InvalidConfig(format!(
                "grid needs at least 64 points, got {}",
                self.points
            )));
        }
        if !(self.theta.abs() <= std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidConfig(format!(
                "scaling angle must satisfy |theta| <= pi/2, got {}",
                self.theta
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.x_max - self.x_min) / (self.points - 1) as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.points).map(|k| self.x_min + k as f64 * h).collect()
    }
}

/// Antisymmetric first-derivative stencil matrix `D` (real).
fn derivative_matrix(spec: &GridSpec) -> Array2<f64> {
    let n = spec.points;
    let h = spec.step();
    let mut d = Array2::<f64>::zeros((n, n));
    match spec.scheme {
        DiffScheme::Order2 => {
            let c = 1.0 / (2.0 * h);
            for i in 0..n {
                if i + 1 < n {
                    d[(i, i + 1)] = c;
                }
                if i >= 1 {
                    d[(i, i - 1)] = -c;
                }
            }
        }
        DiffScheme::Order4 => {
            let c1 = 8.0 / (12.0 * h);
            let c2 = 1.0 / (12.0 * h);
            for i in 0..n {
                if i + 1 < n {
                    d[(i, i + 1)] = c1;
                }
                if i >= 1 {
                    d[(i, i - 1)] = -c1;
                }
                if i + 2 < n {
                    d[(i, i + 2)] = -c2;
                }
                if i >= 2 {
                    d[(i, i - 2)] = c2;
                }
            }
        }
    }
    d
}

/// Symmetric stencil for `−d²/dx²` (positive semidefinite).
fn neg_laplacian(spec: &GridSpec) -> Array2<f64> {
    let n = spec.points;
    let h2 = spec.step() * spec.step();
    let mut m = Array2::<f64>::zeros((n, n));
    match spec.scheme {
        DiffScheme::Order2 => {
            for i in 0..n {
                m[(i, i)] = 2.0 / h2;
                if i + 1 < n {
                    m[(i, i + 1)] = -1.0 / h2;
                }
                if i >= 1 {
                    m[(i, i - 1)] = -1.0 / h2;
                }
            }
        }
        DiffScheme::Order4 => {
            for i in 0..n {
                m[(i, i)] = 30.0 / (12.0 * h2);
                if i + 1 < n {
                    m[(i, i + 1)] = -16.0 / (12.0 * h2);
                }
                if i >= 1 {
                    m[(i, i - 1)] = -16.0 / (12.0 * h2);
                }
                if i + 2 < n {
                    m[(i, i + 2)] = 1.0 / (12.0 * h2);
                }
                if i >= 2 {
                    m[(i, i - 2)] = 1.0 / (12.0 * h2);
                }
            }
        }
    }
    m
}

/// Position and momentum on the grid: `x` diagonal, `p = −i·D` with the
/// antisymmetric real stencil `D`, hence exactly conjugate-symmetric under
/// the grid inner product.
pub fn build_grid_xp(spec: &GridSpec) -> Result<(TruncatedOperator, TruncatedOperator)> {
    spec.validate()?;
    let nodes = spec.nodes();
    let n = spec.points;
    let x = Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j { Complex64::new(nodes[i], 0.0) } else { Complex64::new(0.0, 0.0) }
    });
    let d = derivative_matrix(spec);
    let p = Array2::from_shape_fn((n, n), |(i, j)| Complex64::new(0.0, -d[(i, j)]));
    Ok((
        TruncatedOperator::from_entries(Basis::PositionGrid, x)?,
        TruncatedOperator::from_entries(Basis::PositionGrid, p)?,
    ))
}

fn frobenius(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn hermitian_defect(a: &Array2<Complex64>) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (a[(i, j)] - a[(j, i)].conj()).norm_sqr();
        }
    }
    acc.sqrt()
}

fn anti_hermitian_defect(a: &Array2<Complex64>) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (a[(i, j)] + a[(j, i)].conj()).norm_sqr();
        }
    }
    acc.sqrt()
}

/// Grid assembly of the pieces entering the hermiticity audit, kept in the
/// split form `(X ± iD)² = [X² − D²] ± i[XD + DX]` so the symmetric and
/// antisymmetric parts are explicit.
struct GridAlgebra {
    /// `X² − D²` (real symmetric)
    sym: Array2<f64>,
    /// `XD + DX` (real antisymmetric)
    anti: Array2<f64>,
    /// `X² + D²` (real symmetric; `x̂² − p̂²`)
    sym_plus: Array2<f64>,
}

fn grid_algebra(spec: &GridSpec) -> GridAlgebra {
    let n = spec.points;
    let nodes = spec.nodes();
    let d = derivative_matrix(spec);
    let df = Mat::<f64>::from_fn(n, n, |i, j| d[(i, j)]);
    let d2f = &df * &df;
    let mut sym = Array2::<f64>::zeros((n, n));
    let mut anti = Array2::<f64>::zeros((n, n));
    let mut sym_plus = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let d2 = d2f[(i, j)];
            sym[(i, j)] = -d2;
            sym_plus[(i, j)] = d2;
            anti[(i, j)] = d[(i, j)] * (nodes[i] + nodes[j]);
        }
        sym[(i, i)] += nodes[i] * nodes[i];
        sym_plus[(i, i)] += nodes[i] * nodes[i];
    }
    GridAlgebra { sym, anti, sym_plus }
}

/// L² hermiticity audit on the grid.
#[derive(Debug, Clone)]
pub struct HermiticityReport {
    /// `‖H₀ − H₀ᴴ‖` and `‖H₀‖` — the bare Hamiltonian is Hermitian.
    pub h0_defect: f64,
    pub h0_norm: f64,
    /// `‖S_z + S_zᴴ‖` and `‖S_z‖` — anti-Hermitian in this realization.
    pub sz_defect: f64,
    pub sz_norm: f64,
    /// `‖S± + S±ᴴ‖` and their norms — both anti-Hermitian.
    pub s_plus_defect: f64,
    pub s_plus_norm: f64,
    pub s_minus_defect: f64,
    pub s_minus_norm: f64,
    /// `‖H(G) − H(G)ᴴ‖`, its norm, and the predicted defect scale
    /// `2G·‖S₊−S₋‖`; the coupled Hamiltonian is genuinely non-Hermitian.
    pub hg_defect: f64,
    pub hg_norm: f64,
    pub coupling_scale: f64,
    /// Hermitian defect of the similarity generator `−i(η/2)(S₊+S₋)`
    /// (only below the exceptional point). A Hermitian generator
    /// exponentiates to the Hermitian map `R = R†`; the exponential itself
    /// is never formed on the grid, where its positive spectrum overflows.
    pub r_generator_defect: Option<f64>,
    pub r_generator_norm: Option<f64>,
}

impl HermiticityReport {
    /// Relative pass test at tolerance `tol` for the (anti)hermiticity
    /// claims; the coupled defect must also match `2G‖S₊−S₋‖` within 1%.
    pub fn passes(&self, tol: f64, coupled: bool) -> bool {
        let ok = self.h0_defect <= tol * self.h0_norm
            && self.sz_defect <= tol * self.sz_norm
            && self.s_plus_defect <= tol * self.s_plus_norm
            && self.s_minus_defect <= tol * self.s_minus_norm;
        if !coupled {
            return ok;
        }
        ok && self.hg_defect > 0.0
            && (self.hg_defect / self.coupling_scale - 1.0).abs() <= 0.01
    }
}

/// Assemble `H₀`, `S_z`, `S±`, `H(G)` (and the similarity generator below
/// the exceptional point) on the grid and report their (anti)hermiticity
/// defects under the L² inner product.
pub fn hermiticity_report(params: &ModelParams, spec: &GridSpec) -> Result<HermiticityReport> {
    params.validate()?;
    spec.validate()?;
    let n = spec.points;
    let alg = grid_algebra(spec);
    let lap = neg_laplacian(spec);
    let nodes = spec.nodes();

    // H0 = Ω(p² − x²)/2 with the dedicated second-derivative stencil.
    let h0 = Array2::from_shape_fn((n, n), |(i, j)| {
        let mut v = 0.5 * params.omega * lap[(i, j)];
        if i == j {
            v -= 0.5 * params.omega * nodes[i] * nodes[i];
        }
        Complex64::new(v, 0.0)
    });

    // S_z = (i/4)(x̂² − p̂²), S± = (i/4)(x̂ ∓ p̂)².
    let s_z = Array2::from_shape_fn((n, n), |(i, j)| {
        Complex64::new(0.0, 0.25 * alg.sym_plus[(i, j)])
    });
    let s_plus = Array2::from_shape_fn((n, n), |(i, j)| {
        Complex64::new(-0.25 * alg.anti[(i, j)], 0.25 * alg.sym[(i, j)])
    });
    let s_minus = Array2::from_shape_fn((n, n), |(i, j)| {
        Complex64::new(0.25 * alg.anti[(i, j)], 0.25 * alg.sym[(i, j)])
    });

    // H(G) = H0 + G(S₊ − S₋) = H0 − (G/2)·(XD + DX).
    let hg = Array2::from_shape_fn((n, n), |(i, j)| {
        h0[(i, j)] + Complex64::new(-0.5 * params.g * alg.anti[(i, j)], 0.0)
    });

    let coupling = &s_plus - &s_minus;
    let coupling_scale = 2.0 * params.g * frobenius(&coupling);

    let (r_generator_defect, r_generator_norm) =
        if model::effective_frequency(params).regime == Regime::BelowEp && params.g > 0.0 {
            let eta = model::eta_from_g(params)?;
            // −i(η/2)(S₊+S₋) = (η/4)(X² − D²), real symmetric.
            let generator = Array2::from_shape_fn((n, n), |(i, j)| {
                Complex64::new(0.25 * eta * alg.sym[(i, j)], 0.0)
            });
            (Some(hermitian_defect(&generator)), Some(frobenius(&generator)))
        } else {
            (None, None)
        };

    Ok(HermiticityReport {
        h0_defect: hermitian_defect(&h0),
        h0_norm: frobenius(&h0),
        sz_defect: anti_hermitian_defect(&s_z),
        sz_norm: frobenius(&s_z),
        s_plus_defect: anti_hermitian_defect(&s_plus),
        s_plus_norm: frobenius(&s_plus),
        s_minus_defect: anti_hermitian_defect(&s_minus),
        s_minus_norm: frobenius(&s_minus),
        hg_defect: hermitian_defect(&hg),
        hg_norm: frobenius(&hg),
        coupling_scale,
        r_generator_defect,
        r_generator_norm,
    })
}

/// Complex-scaled resonance computation.
#[derive(Debug, Clone)]
pub struct ResonanceResult {
    /// Computed eigenvalue closest to each target.
    pub eigenvalues: Vec<Complex64>,
    /// `±iΩ(n+½)` depending on the sign of the scaling angle.
    pub targets: Vec<Complex64>,
    /// `|eigenvalue − target|` elementwise.
    pub deviations: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Diagonalize `Ω/2·(e^{−2iθ}p² − e^{2iθ}x²)` on the grid. At `θ = −π/4`
/// this is exactly `+iΩ(p²+x²)/2`, so the resonances are `+iΩ(n+½)` (ket
/// branch); `θ = +π/4` yields the mirrored bra branch. Those two angles
/// reduce to a real symmetric eigensolve; other angles go through the
/// dense complex solver and inherit its dimension cap.
pub fn complex_scaled_spectrum(
    omega: f64,
    spec: &GridSpec,
    levels: usize,
) -> Result<ResonanceResult> {
    spec.validate()?;
    if !(omega > 0.0) {
        return Err(Error::InvalidConfig(format!("omega must be positive, got {omega}")));
    }
    if levels == 0 || levels > 8 {
        return Err(Error::Dimension(format!("levels must be in 1..=8, got {levels}")));
    }
    if spec.theta.abs() < 1e-6 {
        return Err(Error::InvalidConfig(
            "resonance extraction requires a nonzero scaling angle".into(),
        ));
    }

    let mut warnings = Vec::new();
    let turning = ((2.0 * levels as f64 + 1.0) / omega).sqrt();
    let extent = spec.x_min.abs().min(spec.x_max.abs());
    if extent < 2.0 * turning {
        warnings.push(format!(
            "grid extent {extent:.2} may be too small for {levels} levels \
             (turning radius {turning:.2}); expect degraded tails"
        ));
    }

    let branch_sign = if spec.theta < 0.0 { 1.0 } else { -1.0 };
    let targets: Vec<Complex64> = (0..levels)
        .map(|k| Complex64::new(0.0, branch_sign * omega * (k as f64 + 0.5)))
        .collect();

    let exact_angle = (spec.theta.abs() - FRAC_PI_4).abs() < 1e-12;
    let eigenvalues: Vec<Complex64> = if exact_angle {
        // Ω/2(p²+x²) rotated onto the imaginary axis: real symmetric solve.
        let n = spec.points;
        let lap = neg_laplacian(spec);
        let nodes = spec.nodes();
        let m = Mat::<f64>::from_fn(n, n, |i, j| {
            let mut v = 0.5 * omega * lap[(i, j)];
            if i == j {
                v += 0.5 * omega * nodes[i] * nodes[i];
            }
            v
        });
        let evd = m
            .self_adjoint_eigen(faer::Side::Lower)
            .map_err(|e| Error::Convergence(format!("symmetric eigensolver failed: {e:?}")))?;
        let s = evd.S();
        let sv = s.column_vector();
        let mut w: Vec<f64> = (0..n).map(|k| sv[k]).collect();
        w.sort_by(|a, b| a.partial_cmp(b).unwrap());
        (0..levels).map(|k| Complex64::new(0.0, branch_sign * w[k])).collect()
    } else {
        let n = spec.points;
        let lap = neg_laplacian(spec);
        let nodes = spec.nodes();
        let rot_p = Complex64::from_polar(1.0, -2.0 * spec.theta);
        let rot_x = Complex64::from_polar(1.0, 2.0 * spec.theta);
        let entries = Array2::from_shape_fn((n, n), |(i, j)| {
            let mut v = 0.5 * omega * rot_p * lap[(i, j)];
            if i == j {
                v -= 0.5 * omega * rot_x * nodes[i] * nodes[i];
            }
            v
        });
        let op = TruncatedOperator::from_entries(Basis::PositionGrid, entries)?;
        let decomp = spectra::diagonalize(&op)?;
        targets
            .iter()
            .map(|t| {
                decomp
                    .values
                    .iter()
                    .copied()
                    .min_by(|a, b| {
                        (a - t).norm().partial_cmp(&(b - t).norm()).unwrap()
                    })
                    .unwrap()
            })
            .collect()
    };

    let deviations = eigenvalues
        .iter()
        .zip(targets.iter())
        .map(|(e, t)| (e - t).norm())
        .collect();

    Ok(ResonanceResult { eigenvalues, targets, deviations, warnings })
}
