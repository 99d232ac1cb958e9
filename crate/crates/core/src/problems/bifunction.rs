use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{SpaceKind, Vector};

/// Tolerance for the eigenvalue sign checks at construction.
pub const SPECTRAL_TOL: f64 = 1e-9;

/// A bifunction `f(x, y)` with `f(x, x) = 0`, convex in its second argument.
pub trait Bifunction: Send + Sync + fmt::Debug {
    fn eval(&self, x: &Vector, y: &Vector) -> f64;

    /// Some element of the subdifferential of `f(x, .)` at `y`, as a Riesz
    /// representer in the ambient inner product.
    fn partial_subgrad(&self, x: &Vector, y: &Vector) -> Vector;

    /// Constants `(c1, c2)` of the Lipschitz-type inequality
    /// `f(x,y) + f(y,z) >= f(x,z) - c1 |x-y|^2 - c2 |y-z|^2`.
    fn lipschitz(&self) -> Option<(f64, f64)> {
        None
    }

    /// Modulus of strong pseudomonotonicity.
    fn strong_modulus(&self) -> Option<f64> {
        None
    }

    /// Lipschitz bound of `y -> partial_subgrad(x, y)`; zero when `f(x, .)` is affine.
    fn curvature_bound(&self) -> f64;

    /// For variational-inequality bifunctions `f(x,y) = <A x, y - x>`, the value `A x`.
    fn operator(&self, _x: &Vector) -> Option<Vector> {
        None
    }
}

/// `f(x,y) = <P x + Q y + q, y - x>` on Euclidean space.
#[derive(Debug, Clone)]
pub struct AffineBifunction {
    p: DMatrix<f64>,
    q: DMatrix<f64>,
    shift: DVector<f64>,
    lipschitz_c: f64,
    hessian_bound: f64,
}

fn is_symmetric(m: &DMatrix<f64>) -> bool {
    let scale = 1.0 + m.amax();
    (m - m.transpose()).amax() <= SPECTRAL_TOL * scale
}

fn sym_eigen_range(m: &DMatrix<f64>) -> (f64, f64) {
    let sym = 0.5 * (m + m.transpose());
    let ev = sym.symmetric_eigenvalues();
    (ev.min(), ev.max())
}

/// Builds the affine bifunction; verifies that `Q` is symmetric positive
/// semidefinite and `Q - P` negative semidefinite.
pub fn affine_bifunction(
    p: DMatrix<f64>,
    q: DMatrix<f64>,
    shift: &Vector,
) -> Result<AffineBifunction> {
    let n = shift.dim();
    if shift.space().kind() != SpaceKind::Euclidean {
        return Err(Error::InvalidBifunction(
            "affine bifunction is defined on Euclidean space only".into(),
        ));
    }
    for (name, m) in [("P", &p), ("Q", &q)] {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::InvalidBifunction(format!(
                "{name} is {}x{}, expected {n}x{n}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    if !is_symmetric(&q) {
        return Err(Error::InvalidBifunction("Q is not symmetric".into()));
    }
    let (q_min, q_max) = sym_eigen_range(&q);
    if q_min < -SPECTRAL_TOL {
        return Err(Error::InvalidBifunction(format!(
            "Q is not positive semidefinite (smallest eigenvalue {q_min:e})"
        )));
    }
    let (_, qp_max) = sym_eigen_range(&(&q - &p));
    if qp_max > SPECTRAL_TOL {
        return Err(Error::InvalidBifunction(format!(
            "Q - P is not negative semidefinite (largest eigenvalue {qp_max:e})"
        )));
    }
    // f(x,y) + f(y,z) - f(x,z) = <(P - Q)(y - x), z - y>
    let lipschitz_c = 0.5 * (&p - &q).singular_values().max();
    Ok(AffineBifunction {
        p,
        q,
        shift: DVector::from_column_slice(shift.coords()),
        lipschitz_c,
        hessian_bound: 2.0 * q_max.max(0.0),
    })
}

impl AffineBifunction {
    pub fn p(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn shift(&self) -> &DVector<f64> {
        &self.shift
    }

    fn col(v: &Vector) -> DVector<f64> {
        DVector::from_column_slice(v.coords())
    }
}

impl Bifunction for AffineBifunction {
    fn eval(&self, x: &Vector, y: &Vector) -> f64 {
        let (xc, yc) = (Self::col(x), Self::col(y));
        let a = &self.p * &xc + &self.q * &yc + &self.shift;
        a.dot(&(yc - xc))
    }

    fn partial_subgrad(&self, x: &Vector, y: &Vector) -> Vector {
        let (xc, yc) = (Self::col(x), Self::col(y));
        let g = &self.p * &xc + &self.shift + &self.q * &yc + &self.q * (&yc - &xc);
        Vector::from_raw(x.space(), g.as_slice().to_vec())
    }

    fn lipschitz(&self) -> Option<(f64, f64)> {
        Some((self.lipschitz_c, self.lipschitz_c))
    }

    fn curvature_bound(&self) -> f64 {
        self.hessian_bound
    }
}

pub type Operator = Arc<dyn Fn(&Vector) -> Vector + Send + Sync>;

/// `f(x,y) = <A x, y - x>`.
#[derive(Clone)]
pub struct ViBifunction {
    op: Operator,
    lipschitz_l: Option<f64>,
    gamma: Option<f64>,
    label: String,
}

impl fmt::Debug for ViBifunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ViBifunction")
            .field("label", &self.label)
            .field("lipschitz_l", &self.lipschitz_l)
            .field("gamma", &self.gamma)
            .finish()
    }
}

pub fn vi_bifunction(
    op: Operator,
    lipschitz_l: Option<f64>,
    gamma: Option<f64>,
) -> ViBifunction {
    ViBifunction {
        op,
        lipschitz_l,
        gamma,
        label: "vi".into(),
    }
}

impl ViBifunction {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn lipschitz_l(&self) -> Option<f64> {
        self.lipschitz_l
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        (self.op)(x)
    }
}

impl Bifunction for ViBifunction {
    fn eval(&self, x: &Vector, y: &Vector) -> f64 {
        self.apply(x).inner(&(y - x))
    }

    fn partial_subgrad(&self, x: &Vector, _y: &Vector) -> Vector {
        self.apply(x)
    }

    fn lipschitz(&self) -> Option<(f64, f64)> {
        self.lipschitz_l.map(|l| (0.5 * l, 0.5 * l))
    }

    fn strong_modulus(&self) -> Option<f64> {
        self.gamma
    }

    fn curvature_bound(&self) -> f64 {
        0.0
    }

    fn operator(&self, x: &Vector) -> Option<Vector> {
        Some(self.apply(x))
    }
}

/// `A x = (3/2 - |x|) x`.
pub fn damped_radial() -> Operator {
    Arc::new(|x: &Vector| x.scale(1.5 - x.norm()))
}

/// `A x = x / (1 + |x|^2)`.
pub fn saturating_radial() -> Operator {
    Arc::new(|x: &Vector| x.scale(1.0 / (1.0 + x.norm_sq())))
}

/// `A x = M x + m` on Euclidean space.
pub fn linear_operator(m: DMatrix<f64>, shift: Vec<f64>) -> Operator {
    Arc::new(move |x: &Vector| {
        let v = &m * DVector::from_column_slice(x.coords());
        let coords = v.iter().zip(&shift).map(|(a, b)| a + b).collect();
        Vector::from_raw(x.space(), coords)
    })
}

pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.clone().singular_values().max()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::InnerProductSpace;
    use crate::problems::instances::{example61_matrices, example61_shift};

    fn e(v: &[f64]) -> Vector {
        Vector::new(&InnerProductSpace::euclidean(v.len()).unwrap(), v.to_vec()).unwrap()
    }

    fn sample_affine() -> AffineBifunction {
        let (p, q) = example61_matrices();
        let s = InnerProductSpace::euclidean(5).unwrap();
        affine_bifunction(p, q, &example61_shift(&s)).unwrap()
    }

    #[test]
    fn affine_hand_values() {
        let f = sample_affine();
        let zero = e(&[0.0; 5]);
        let e1 = e(&[1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(f.eval(&zero, &zero), 0.0);
        assert!((f.eval(&zero, &e1) - 2.6).abs() < 1e-14);
        assert!((f.eval(&e1, &zero) + 4.1).abs() < 1e-14);
    }

    #[test]
    fn affine_gradient_matches_finite_differences() {
        let f = sample_affine();
        let x = e(&[0.3, -1.2, 2.0, 0.5, -0.7]);
        let y = e(&[1.1, 0.4, -0.3, 2.2, 0.9]);
        let g = f.partial_subgrad(&x, &y);
        let h = 1e-6;
        for i in 0..5 {
            let mut yp = y.coords().to_vec();
            let mut ym = y.coords().to_vec();
            yp[i] += h;
            ym[i] -= h;
            let fd = (f.eval(&x, &e(&yp)) - f.eval(&x, &e(&ym))) / (2.0 * h);
            assert!((fd - g.coords()[i]).abs() < 1e-7, "coordinate {i}: {fd} vs {}", g.coords()[i]);
        }
    }

    #[test]
    fn affine_constants() {
        let f = sample_affine();
        let (c1, c2) = f.lipschitz().unwrap();
        assert_eq!(c1, c2);
        // |P - Q| for the shipped matrices: largest eigenvalue of the 2x2 block [[2,1],[1,1.8]]
        let expected = 0.5 * (1.9 + (0.01f64 + 1.0).sqrt());
        assert!((c1 - expected).abs() < 1e-12);
        assert!((f.curvature_bound() - 5.2).abs() < 1e-12);
    }

    #[test]
    fn affine_construction_checks() {
        let (p, q) = example61_matrices();
        let s = InnerProductSpace::euclidean(5).unwrap();
        let shift = example61_shift(&s);
        let mut bad = q.clone();
        bad[(0, 1)] = 3.0;
        assert!(affine_bifunction(p.clone(), bad, &shift).is_err());
        let mut indefinite = q.clone();
        indefinite[(4, 4)] = -1.0;
        assert!(affine_bifunction(p.clone(), indefinite, &shift).is_err());
        // Q - P must be NSD: P = 0 breaks it since Q is PSD and nonzero
        assert!(affine_bifunction(DMatrix::zeros(5, 5), q.clone(), &shift).is_err());
        let t = InnerProductSpace::trapezoid(5).unwrap();
        assert!(affine_bifunction(p, q, &Vector::zeros(&t)).is_err());
    }

    #[test]
    fn vi_identity() {
        let f = vi_bifunction(Arc::new(|x: &Vector| x.clone()), Some(1.0), None);
        assert_eq!(f.eval(&e(&[1.0, 0.0]), &e(&[0.0, 1.0])), -1.0);
        let x = e(&[0.4, -2.0]);
        assert_eq!(f.partial_subgrad(&x, &e(&[9.0, 9.0])), x);
        assert_eq!(f.partial_subgrad(&x, &e(&[-3.0, 1.0])), x);
        assert_eq!(f.lipschitz(), Some((0.5, 0.5)));
    }

    #[test]
    fn radial_vanishes_on_diagonal() {
        let f = vi_bifunction(damped_radial(), None, None);
        let s = InnerProductSpace::trapezoid(11).unwrap();
        let x = Vector::from_fn(&s, |t| t.sin()).unwrap();
        assert_eq!(f.eval(&x, &x), 0.0);
    }
}
