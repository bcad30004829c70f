//! State of a single three-level engine particle.
//!
//! Levels are indexed from zero in code: `0` is the ground level, `1` the
//! cold excited level (coupled to the cold bath), `2` the hot excited level
//! (coupled to the hot bath). Only the coherence between levels `1` and `2`
//! is ever generated, so the excited pair is also exposed as a Bloch vector
//! in the y-z plane.

use nalgebra::{Matrix3, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for hermiticity, trace and positivity checks.
pub const STATE_TOL: f64 = 1e-12;

/// Eigenvalues of the second argument below this are treated as zero when
/// checking supports in [`relative_entropy`].
pub const SUPPORT_TOL: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Populations of the three levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbVector3([f64; 3]);

impl ProbVector3 {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Result<Self> {
        Self::from_array([p1, p2, p3])
    }

    pub fn from_array(p: [f64; 3]) -> Result<Self> {
        for (k, &v) in p.iter().enumerate() {
            if !v.is_finite() || !(-STATE_TOL..=1.0 + STATE_TOL).contains(&v) {
                return Err(Error::InvalidState(format!(
                    "population {} = {v} outside [0, 1]",
                    k + 1
                )));
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "populations sum to {sum}, expected 1"
            )));
        }
        Ok(Self(p.map(|v| v.clamp(0.0, 1.0))))
    }

    pub fn p1(&self) -> f64 {
        self.0[0]
    }

    pub fn p2(&self) -> f64 {
        self.0[1]
    }

    pub fn p3(&self) -> f64 {
        self.0[2]
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.0
    }

    /// Population inversion `p3 - p2` between the hot and cold excited levels.
    pub fn inversion(&self) -> f64 {
        self.0[2] - self.0[1]
    }

    /// Shannon entropy in nats, with `0 ln 0 = 0`.
    pub fn shannon_entropy(&self) -> f64 {
        -self.0.iter().map(|&p| xlnx(p)).sum::<f64>()
    }
}

/// Classical relative entropy `sum p ln(p/q)` in nats.
///
/// Fails with [`Error::InfiniteDivergence`] if `q` vanishes where `p` does not.
pub fn kl_divergence(p: &ProbVector3, q: &ProbVector3) -> Result<f64> {
    let mut d = 0.0;
    for (&pj, &qj) in p.0.iter().zip(q.0.iter()) {
        if pj <= 0.0 {
            continue;
        }
        if qj <= SUPPORT_TOL {
            return Err(Error::InfiniteDivergence);
        }
        d += pj * (pj / qj).ln();
    }
    Ok(d)
}

/// Bloch vector of the excited two-level subspace.
///
/// `z = p3 - p2` is the population inversion and `y = i(rho_23 - rho_32)` the
/// coherence. There is no x component: the drive only generates imaginary
/// 2-3 coherences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector23 {
    pub y: f64,
    pub z: f64,
}

impl BlochVector23 {
    pub fn new(y: f64, z: f64) -> Self {
        Self { y, z }
    }

    /// Vector of length `radius` at polar angle `theta` measured from +z
    /// towards +y.
    pub fn from_polar(radius: f64, theta: f64) -> Self {
        Self {
            y: radius * theta.sin(),
            z: radius * theta.cos(),
        }
    }

    pub fn radius(&self) -> f64 {
        self.y.hypot(self.z)
    }

    /// Angle from the north pole (+z), positive towards +y.
    pub fn angle(&self) -> f64 {
        self.y.atan2(self.z)
    }
}

/// 3x3 density matrix of one engine particle.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix3(Matrix3<Complex64>);

impl DensityMatrix3 {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(m: Matrix3<Complex64>) -> Result<Self> {
        for i in 0..3 {
            for j in i..3 {
                let d = m[(i, j)] - m[(j, i)].conj();
                if d.norm() > STATE_TOL || !m[(i, j)].re.is_finite() || !m[(i, j)].im.is_finite()
                {
                    return Err(Error::InvalidState(format!(
                        "not hermitian at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min_eig = m.symmetric_eigenvalues().min();
        if min_eig < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig}"
            )));
        }
        Ok(Self(m))
    }

    /// Diagonal (incoherent) state with the given populations.
    pub fn diagonal(p: &ProbVector3) -> Self {
        let [a, b, c] = p.as_array();
        Self(Matrix3::from_diagonal(&nalgebra::Vector3::new(
            Complex64::from(a),
            Complex64::from(b),
            Complex64::from(c),
        )))
    }

    pub fn matrix(&self) -> &Matrix3<Complex64> {
        &self.0
    }

    /// Element at zero-based `(row, col)`.
    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn populations(&self) -> ProbVector3 {
        // Diagonal of a validated state is a probability vector up to
        // round-off; clamp rather than fail.
        ProbVector3([0, 1, 2].map(|k| self.0[(k, k)].re.clamp(0.0, 1.0)))
    }

    /// Largest absolute off-diagonal element.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    m = m.max(self.0[(i, j)].norm());
                }
            }
        }
        m
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.max_off_diagonal() <= tol
    }

    /// Eigenvalues in ascending order, with round-off negatives clipped to 0.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let mut ev: Vec<f64> = self
            .0
            .symmetric_eigenvalues()
            .iter()
            .map(|&v| v.max(0.0))
            .collect();
        ev.sort_by(f64::total_cmp);
        [ev[0], ev[1], ev[2]]
    }
}

fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Von Neumann entropy `-tr(rho ln rho)` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix3) -> f64 {
    -rho.eigenvalues().iter().map(|&l| xlnx(l)).sum::<f64>()
}

/// Quantum relative entropy `D(rho || sigma) = tr[rho (ln rho - ln sigma)]`.
pub fn relative_entropy(rho: &DensityMatrix3, sigma: &DensityMatrix3) -> Result<f64> {
    let neg_entropy: f64 = rho.eigenvalues().iter().map(|&l| xlnx(l)).sum();

    let eig = SymmetricEigen::new(*sigma.matrix());
    let mut cross = 0.0;
    for k in 0..3 {
        let v = eig.eigenvectors.column(k);
        // weight = <v_k| rho |v_k>
        let weight = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
        let mu = eig.eigenvalues[k];
        if mu <= SUPPORT_TOL {
            if weight > SUPPORT_TOL {
                return Err(Error::InfiniteDivergence);
            }
            continue;
        }
        cross += weight * mu.ln();
    }
    Ok(neg_entropy - cross)
}

/// Removes every coherence, keeping the populations.
pub fn dephase(rho: &DensityMatrix3) -> DensityMatrix3 {
    DensityMatrix3::diagonal(&rho.populations())
}

/// Relative-entropy coherence `C(rho) = D(rho || diag rho) = S(diag rho) - S(rho)`.
pub fn coherence_measure(rho: &DensityMatrix3) -> f64 {
    von_neumann_entropy(&dephase(rho)) - von_neumann_entropy(rho)
}

/// Work-stroke unitary: rotation by `delta_theta` generated by sigma_x on
/// the excited pair, identity on the ground level.
pub fn work_unitary(delta_theta: f64) -> Matrix3<Complex64> {
    let c = Complex64::from((delta_theta / 2.0).cos());
    let s = Complex64::new(0.0, -(delta_theta / 2.0).sin());
    let one = Complex64::from(1.0);
    Matrix3::new(one, ZERO, ZERO, ZERO, c, s, ZERO, s, c)
}

/// Applies [`work_unitary`]. A positive angle turns the Bloch vector from +z
/// towards +y; `pi` swaps the two excited populations.
pub fn apply_work_unitary(rho: &DensityMatrix3, delta_theta: f64) -> DensityMatrix3 {
    let u = work_unitary(delta_theta);
    let mut out = u * rho.matrix() * u.adjoint();
    // restore exact hermiticity lost to round-off
    out = (out + out.adjoint()) * Complex64::from(0.5);
    DensityMatrix3(out)
}

pub fn to_bloch(rho: &DensityMatrix3) -> BlochVector23 {
    let c23 = rho.element(1, 2);
    let c32 = rho.element(2, 1);
    let y = (Complex64::i() * (c23 - c32)).re;
    let z = rho.element(2, 2).re - rho.element(1, 1).re;
    BlochVector23 { y, z }
}

/// Builds the state with ground population `p1`, excited-pair weight `s`
/// and excited-pair Bloch vector `b`.
pub fn from_bloch(p1: f64, b: BlochVector23, s: f64) -> Result<DensityMatrix3> {
    if (p1 + s - 1.0).abs() > STATE_TOL {
        return Err(Error::InvalidState(format!(
            "p1 + s = {} (expected 1)",
            p1 + s
        )));
    }
    if p1 < -STATE_TOL || s < -STATE_TOL {
        return Err(Error::InvalidState("negative population weight".into()));
    }
    if b.radius() > s + STATE_TOL {
        return Err(Error::InvalidState(format!(
            "Bloch radius {} exceeds excited weight {s}",
            b.radius()
        )));
    }
    let p2 = (s - b.z) / 2.0;
    let p3 = (s + b.z) / 2.0;
    let c23 = Complex64::new(0.0, -b.y / 2.0);
    let m = Matrix3::new(
        Complex64::from(p1),
        ZERO,
        ZERO,
        ZERO,
        Complex64::from(p2),
        c23,
        ZERO,
        c23.conj(),
        Complex64::from(p3),
    );
    DensityMatrix3::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, LN_2, PI};

    fn diag(a: f64, b: f64, c: f64) -> DensityMatrix3 {
        DensityMatrix3::diagonal(&ProbVector3::new(a, b, c).unwrap())
    }

    fn superposition_23() -> DensityMatrix3 {
        from_bloch(0.0, BlochVector23::new(1.0, 0.0), 1.0).unwrap()
    }

    fn max_abs_diff(a: &DensityMatrix3, b: &DensityMatrix3) -> f64 {
        (a.matrix() - b.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    // exp(-i t/2 X) on the excited pair by Taylor series, independent of the
    // closed-form cos/sin entries.
    fn unitary_by_series(theta: f64) -> Matrix3<Complex64> {
        let mut gen = Matrix3::<Complex64>::zeros();
        gen[(1, 2)] = Complex64::new(0.0, -theta / 2.0);
        gen[(2, 1)] = Complex64::new(0.0, -theta / 2.0);
        let mut term = Matrix3::<Complex64>::identity();
        let mut sum = term;
        for k in 1..60 {
            term = term * gen / Complex64::from(k as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn entropy_of_pure_and_maximally_mixed() {
        assert_abs_diff_eq!(von_neumann_entropy(&diag(1.0, 0.0, 0.0)), 0.0, epsilon = 1e-15);
        let third = 1.0 / 3.0;
        assert_abs_diff_eq!(
            von_neumann_entropy(&diag(third, third, third)),
            3f64.ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn entropy_of_reference_gibbs_diagonal() {
        // eigen-free oracle: -sum p ln p on the diagonal
        let p = [0.553815, 0.074951, 1.0 - 0.553815 - 0.074951];
        let oracle: f64 = -p.iter().map(|&x| x * f64::ln(x)).sum::<f64>();
        let rho = diag(p[0], p[1], p[2]);
        assert_abs_diff_eq!(von_neumann_entropy(&rho), oracle, epsilon = 1e-12);
    }

    #[test]
    fn relative_entropy_examples() {
        let a = diag(0.5, 0.5, 0.0);
        let b = diag(0.25, 0.75, 0.0);
        let oracle = 0.5 * (0.5f64 / 0.25).ln() + 0.5 * (0.5f64 / 0.75).ln();
        assert_abs_diff_eq!(relative_entropy(&a, &b).unwrap(), oracle, epsilon = 1e-12);
        assert_abs_diff_eq!(oracle, 0.143841, epsilon = 1e-6);
        assert_abs_diff_eq!(relative_entropy(&a, &a).unwrap(), 0.0, epsilon = 1e-12);
        let rho = superposition_23();
        assert_abs_diff_eq!(relative_entropy(&rho, &rho).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn relative_entropy_support_violation() {
        let a = diag(0.5, 0.5, 0.0);
        let b = diag(1.0, 0.0, 0.0);
        assert_eq!(relative_entropy(&a, &b), Err(Error::InfiniteDivergence));
        // support of b is inside support of a: finite
        assert!(relative_entropy(&b, &a).is_ok());
    }

    #[test]
    fn coherence_of_equal_superposition_is_ln2() {
        let rho = superposition_23();
        assert_abs_diff_eq!(rho.element(1, 2).norm(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(coherence_measure(&rho), LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(coherence_measure(&diag(0.2, 0.3, 0.5)), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn coherence_is_permutation_invariant() {
        let rho = from_bloch(0.3, BlochVector23::new(0.4, 0.2), 0.7).unwrap();
        // swap levels 2 and 3 with a permutation matrix
        let mut perm = Matrix3::<Complex64>::zeros();
        perm[(0, 0)] = Complex64::from(1.0);
        perm[(1, 2)] = Complex64::from(1.0);
        perm[(2, 1)] = Complex64::from(1.0);
        let swapped = DensityMatrix3::new(perm * rho.matrix() * perm.transpose()).unwrap();
        assert_abs_diff_eq!(
            coherence_measure(&rho),
            coherence_measure(&swapped),
            epsilon = 1e-12
        );
    }

    #[test]
    fn dephase_examples() {
        let d = diag(0.1, 0.2, 0.7);
        assert_eq!(dephase(&d), d);
        let sup = dephase(&superposition_23());
        assert_eq!(sup, diag(0.0, 0.5, 0.5));
        assert_eq!(dephase(&sup), sup);
    }

    #[test]
    fn work_unitary_identity_and_pi_pulse() {
        let rho = diag(0.553815, 0.074951, 0.371234);
        assert!(max_abs_diff(&apply_work_unitary(&rho, 0.0), &rho) < 1e-15);
        let flipped = apply_work_unitary(&rho, PI);
        assert!(max_abs_diff(&flipped, &diag(0.553815, 0.371234, 0.074951)) < 1e-12);
    }

    #[test]
    fn work_unitary_matches_series_oracle() {
        for &theta in &[0.1, 0.7, FRAC_PI_2, 2.9, PI] {
            let diff = (work_unitary(theta) - unitary_by_series(theta))
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-13, "theta={theta} diff={diff}");
        }
    }

    #[test]
    fn work_unitary_composes() {
        let rho = from_bloch(0.25, BlochVector23::new(0.1, 0.3), 0.75).unwrap();
        let (a, b) = (0.37, 1.21);
        let two_step = apply_work_unitary(&apply_work_unitary(&rho, a), b);
        let u = unitary_by_series(a + b);
        let oracle = DensityMatrix3::new(u * rho.matrix() * u.adjoint()).unwrap();
        assert!(max_abs_diff(&two_step, &oracle) < 1e-12);
    }

    #[test]
    fn quarter_turn_from_north_pole_points_along_plus_y() {
        let rho = diag(0.2, 0.1, 0.7);
        let r0 = to_bloch(&rho);
        assert_abs_diff_eq!(r0.y, 0.0);
        assert_abs_diff_eq!(r0.z, 0.6, epsilon = 1e-15);

        let u = unitary_by_series(FRAC_PI_2);
        let oracle = DensityMatrix3::new(u * rho.matrix() * u.adjoint()).unwrap();
        let b = to_bloch(&oracle);
        assert_abs_diff_eq!(b.z, 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(b.y, 0.6, epsilon = 1e-13);
        let b2 = to_bloch(&apply_work_unitary(&rho, FRAC_PI_2));
        assert_abs_diff_eq!(b2.y, b.y, epsilon = 1e-13);
        assert_abs_diff_eq!(b2.angle(), FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn from_bloch_rejects_oversized_radius() {
        let err = from_bloch(0.5, BlochVector23::new(0.4, 0.4), 0.5).unwrap_err();
        assert!(matches!(err, Error::InvalidState(_)));
        assert!(from_bloch(0.6, BlochVector23::new(0.0, 0.1), 0.5).is_err());
    }

    #[test]
    fn invalid_matrices_are_rejected() {
        let mut m = Matrix3::<Complex64>::zeros();
        m[(0, 0)] = Complex64::from(1.5);
        m[(1, 1)] = Complex64::from(-0.5);
        assert!(matches!(DensityMatrix3::new(m), Err(Error::InvalidState(_))));

        let mut h = Matrix3::<Complex64>::zeros();
        h[(0, 0)] = Complex64::from(0.5);
        h[(1, 1)] = Complex64::from(0.5);
        h[(0, 1)] = Complex64::new(0.1, 0.1);
        h[(1, 0)] = Complex64::new(0.1, 0.1);
        assert!(DensityMatrix3::new(h).is_err());

        assert!(ProbVector3::new(0.5, 0.6, -0.1).is_err());
        assert!(ProbVector3::new(0.5, 0.4, 0.2).is_err());
    }

    #[test]
    fn kl_matches_quantum_relative_entropy_on_diagonals() {
        let p = ProbVector3::new(0.2, 0.3, 0.5).unwrap();
        let q = ProbVector3::new(0.5, 0.25, 0.25).unwrap();
        let classical = kl_divergence(&p, &q).unwrap();
        let quantum =
            relative_entropy(&DensityMatrix3::diagonal(&p), &DensityMatrix3::diagonal(&q)).unwrap();
        assert_abs_diff_eq!(classical, quantum, epsilon = 1e-12);
    }
}
