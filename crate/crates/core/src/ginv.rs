//! Group inverse and Moore-Penrose inverse of the Kirchhoff matrix.

use std::sync::Arc;

use serde::Serialize;

use crate::digraph::WeightedDigraph;
use crate::error::{Error, Result};
use crate::forest::{forest_sequence, q_tau, ForestSequence};
use crate::matrix::Matrix;
use crate::registry::{Named, Registry};
use crate::scalar::Scalar;

/// One way of computing the group inverse `L^#`.
pub trait GroupInverseRoute<T: Scalar>: Named + Send + Sync {
    /// `alpha` is the nonzero shift used by routes that need one.
    fn compute(&self, seq: &ForestSequence<T>, alpha: &T) -> Result<Matrix<T>>;
}

/// `(L + alpha J̄)^-1 - alpha^-1 J̄`.
pub struct ShiftedInverse;

/// `(sigma_{n-v-1} / sigma_{n-v}) (J_{n-v-1} - J̄)`, i.e. from the two densest forest matrices.
pub struct DenseForests;

impl Named for ShiftedInverse {
    fn name(&self) -> &'static str {
        "shifted-inverse"
    }

    fn describe(&self) -> &'static str {
        "(L + alpha J̄)^-1 - J̄ / alpha"
    }
}

impl<T: Scalar> GroupInverseRoute<T> for ShiftedInverse {
    fn compute(&self, seq: &ForestSequence<T>, alpha: &T) -> Result<Matrix<T>> {
        check_alpha(alpha)?;
        let jbar = seq.jbar();
        let shifted = &seq.kirchhoff + &jbar.scale(alpha);
        let inv = shifted.inverse().map_err(|_| {
            Error::Consistency(format!("L + {alpha} J̄ is singular"))
        })?;
        Ok(&inv - &jbar.scale(&(T::one() / alpha.clone())))
    }
}

impl Named for DenseForests {
    fn name(&self) -> &'static str {
        "dense-forest"
    }

    fn describe(&self) -> &'static str {
        "(sigma_{n-v-1} / sigma_{n-v}) (J_{n-v-1} - J̄)"
    }
}

impl<T: Scalar> GroupInverseRoute<T> for DenseForests {
    fn compute(&self, seq: &ForestSequence<T>, _alpha: &T) -> Result<Matrix<T>> {
        let top = seq.top();
        if top == 0 {
            // no arcs: L = 0 and its group inverse is 0
            return Ok(Matrix::zeros(seq.n()));
        }
        let ratio = seq.sigmas[top - 1].clone() / seq.sigmas[top].clone();
        Ok((&seq.normalized(top - 1) - &seq.jbar()).scale(&ratio))
    }
}

pub fn group_inverse_routes<T: Scalar>() -> Registry<dyn GroupInverseRoute<T>> {
    let mut r: Registry<dyn GroupInverseRoute<T>> = Registry::new("group-inverse route");
    r.register(Arc::new(ShiftedInverse))
        .register(Arc::new(DenseForests));
    r
}

fn check_alpha<T: Scalar>(alpha: &T) -> Result<()> {
    if alpha.is_zero() {
        return Err(Error::out_of_range("alpha", alpha, "alpha != 0"));
    }
    Ok(())
}

/// A second shift, distinct from `alpha` and nonzero.
fn other_alpha<T: Scalar>(alpha: &T) -> T {
    let candidate = alpha.clone() + T::one();
    if candidate.is_zero() {
        alpha.clone() + alpha.clone()
    } else {
        candidate
    }
}

/// `L^#` from a forest sequence: both routes, and the shifted route at a
/// second `alpha`, must agree.
pub fn group_inverse_of<T: Scalar>(seq: &ForestSequence<T>, alpha: &T) -> Result<Matrix<T>> {
    check_alpha(alpha)?;
    let by_shift = ShiftedInverse.compute(seq, alpha)?;
    let by_forests = DenseForests.compute(seq, alpha)?;
    if !by_shift.approx_eq(&by_forests) {
        return Err(Error::Consistency(format!(
            "group inverse routes disagree (max diff {})",
            by_shift.max_abs_diff(&by_forests)
        )));
    }
    let second = ShiftedInverse.compute(seq, &other_alpha(alpha))?;
    if !second.approx_eq(&by_shift) {
        return Err(Error::Consistency(
            "group inverse depends on alpha".to_string(),
        ));
    }
    Ok(by_shift)
}

pub fn group_inverse<T: Scalar>(g: &WeightedDigraph, alpha: &T) -> Result<Matrix<T>> {
    group_inverse_of(&forest_sequence(g)?, alpha)
}

#[derive(Clone, Debug)]
pub struct LimitPoint<T> {
    pub tau: T,
    /// `tau (Q(tau) - J̄)`.
    pub scaled: Matrix<T>,
    /// Max-entry distance of `scaled` to `L^#`.
    pub distance: f64,
}

#[derive(Clone, Debug)]
pub struct LimitReport<T> {
    pub group_inverse: Matrix<T>,
    pub points: Vec<LimitPoint<T>>,
}

impl<T> LimitReport<T> {
    /// Distances shrink strictly along the schedule (staying at zero is allowed).
    pub fn monotone(&self) -> bool {
        self.points
            .windows(2)
            .all(|w| w[1].distance < w[0].distance || (w[0].distance == 0.0 && w[1].distance == 0.0))
    }

    pub fn final_distance(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.distance)
    }
}

/// Evaluates `tau (Q(tau) - J̄)` along an increasing schedule of `tau` and
/// measures how close it gets to `L^#`.
pub fn group_inverse_limit<T: Scalar>(g: &WeightedDigraph, schedule: &[T]) -> Result<LimitReport<T>> {
    if schedule.is_empty() {
        return Err(Error::Precondition("empty tau schedule".to_string()));
    }
    for w in schedule.windows(2) {
        if !w[1].definitely_gt(&w[0]) {
            return Err(Error::Precondition(format!(
                "tau schedule must increase ({} then {})",
                w[0], w[1]
            )));
        }
    }
    let seq = forest_sequence(g)?;
    let group = group_inverse_of(&seq, &T::one())?;
    let jbar = seq.jbar();
    let points = schedule
        .iter()
        .map(|tau| {
            let q = q_tau(&seq, tau)?;
            let scaled = (&q - &jbar).scale(tau);
            Ok(LimitPoint {
                tau: tau.clone(),
                distance: scaled.max_abs_diff(&group),
                scaled,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitReport {
        group_inverse: group,
        points,
    })
}

/// Which of the five generalized-inverse conditions `X` satisfies for `A`:
/// (1) AXA = A, (2) XAX = X, (3) AX symmetric, (4) XA symmetric, (5) AX = XA.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PenroseReport {
    pub conditions: [bool; 5],
}

impl PenroseReport {
    pub fn holds(&self, k: usize) -> bool {
        self.conditions[k - 1]
    }

    pub fn is_moore_penrose(&self) -> bool {
        self.conditions[..4].iter().all(|&c| c)
    }

    pub fn is_group_inverse(&self) -> bool {
        self.holds(1) && self.holds(2) && self.holds(5)
    }
}

pub fn penrose_report<T: Scalar>(a: &Matrix<T>, x: &Matrix<T>) -> Result<PenroseReport> {
    if a.order() != x.order() {
        return Err(Error::OrderMismatch(a.order(), x.order()));
    }
    let ax = a * x;
    let xa = x * a;
    Ok(PenroseReport {
        conditions: [
            (&ax * a).approx_eq(a),
            (&xa * x).approx_eq(x),
            ax.is_symmetric(),
            xa.is_symmetric(),
            ax.approx_eq(&xa),
        ],
    })
}

/// `L^+ = L^T (J̄^T J̄ + L L^T)^-1`, verified against the four Penrose conditions.
pub fn moore_penrose_of<T: Scalar>(seq: &ForestSequence<T>) -> Result<Matrix<T>> {
    let l = &seq.kirchhoff;
    let jbar = seq.jbar();
    let lt = l.transpose();
    let llt = l * &lt;
    let jtj = &jbar.transpose() * &jbar;
    let z = l + &jbar.transpose();
    let zzt = &z * &z.transpose();
    if !zzt.approx_eq(&(&jtj + &llt)) {
        return Err(Error::Consistency("Z Z^T != J̄^T J̄ + L L^T".to_string()));
    }
    let m = zzt
        .inverse()
        .map_err(|_| Error::Consistency("Z Z^T is singular".to_string()))?;
    if !(&m * &llt).approx_eq(&(&llt * &m)) || !(&m * &jtj).approx_eq(&(&jtj * &m)) {
        return Err(Error::Consistency(
            "(Z Z^T)^-1 does not commute with L L^T and J̄^T J̄".to_string(),
        ));
    }
    if !(&llt * &m).is_symmetric() {
        return Err(Error::Consistency("L L^T (Z Z^T)^-1 is not symmetric".to_string()));
    }
    let x = &lt * &m;
    let report = penrose_report(l, &x)?;
    if !report.is_moore_penrose() {
        return Err(Error::Consistency(format!(
            "Penrose conditions fail: {:?}",
            report.conditions
        )));
    }
    Ok(x)
}

pub fn moore_penrose<T: Scalar>(g: &WeightedDigraph) -> Result<Matrix<T>> {
    moore_penrose_of(&forest_sequence(g)?)
}

#[derive(Clone, Debug)]
pub struct InverseBundle<T> {
    pub group_inverse: Matrix<T>,
    pub moore_penrose: Matrix<T>,
    /// `Z = L + J̄^T`.
    pub z_matrix: Matrix<T>,
    pub alpha_used: T,
}

/// Both inverses together, with the nonsingularity of `Z` and `L + alpha J̄` checked.
pub fn inverse_bundle<T: Scalar>(g: &WeightedDigraph, alpha: &T) -> Result<InverseBundle<T>> {
    let seq = forest_sequence(g)?;
    let jbar = seq.jbar();
    let z = &seq.kirchhoff + &jbar.transpose();
    if z.rank() != seq.n() {
        return Err(Error::Consistency("Z = L + J̄^T is singular".to_string()));
    }
    if (&seq.kirchhoff + &jbar.scale(alpha)).rank() != seq.n() {
        return Err(Error::Consistency(format!("L + {alpha} J̄ is singular")));
    }
    Ok(InverseBundle {
        group_inverse: group_inverse_of(&seq, alpha)?,
        moore_penrose: moore_penrose_of(&seq)?,
        z_matrix: z,
        alpha_used: alpha.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::{integer, rational, Rational};

    #[test]
    fn path_group_inverse() {
        let g = fixtures::path_digraph();
        let gi: Matrix<Rational> = group_inverse(&g, &integer(1)).unwrap();
        assert_eq!(gi[(1, 0)], rational(-1, 4));
        assert!(gi.row(0).iter().all(|x| *x == integer(0)));
        let seq: ForestSequence<Rational> = forest_sequence(&g).unwrap();
        let l = &seq.kirchhoff;
        let eye_minus_j = &Matrix::identity(4) - &seq.jbar();
        assert_eq!(&gi * l, eye_minus_j);
        assert_eq!(l * &gi, eye_minus_j);
        let r = penrose_report(l, &gi).unwrap();
        assert!(r.is_group_inverse());
        assert!(!r.is_moore_penrose());
    }

    #[test]
    fn alpha_zero_is_rejected() {
        let g = fixtures::path_digraph();
        assert!(group_inverse::<Rational>(&g, &integer(0)).is_err());
    }

    #[test]
    fn empty_digraph_inverses_vanish() {
        let g = WeightedDigraph::empty(3).unwrap();
        assert!(group_inverse::<Rational>(&g, &integer(1)).unwrap().is_zero());
        assert!(moore_penrose::<Rational>(&g).unwrap().is_zero());
        let lim = group_inverse_limit::<Rational>(&g, &[integer(1), integer(10)]).unwrap();
        assert!(lim.points.iter().all(|p| p.distance == 0.0));
        assert!(lim.monotone());
    }

    #[test]
    fn symmetric_pair() {
        let g = WeightedDigraph::from_labeled(
            &["a", "b"],
            &[("a", "b", integer(1)), ("b", "a", integer(1))],
        )
        .unwrap();
        let l: Matrix<Rational> = g.kirchhoff();
        let quarter = l.scale(&rational(1, 4));
        assert_eq!(moore_penrose::<Rational>(&g).unwrap(), quarter);
        assert_eq!(group_inverse::<Rational>(&g, &integer(1)).unwrap(), quarter);
    }

    #[test]
    fn path_moore_penrose_differs_from_group_inverse() {
        let g = fixtures::path_digraph();
        let b: InverseBundle<Rational> = inverse_bundle(&g, &integer(1)).unwrap();
        assert_ne!(b.moore_penrose, b.group_inverse);
        let l: Matrix<Rational> = g.kirchhoff();
        let r = penrose_report(&l, &b.moore_penrose).unwrap();
        assert!(r.is_moore_penrose());
        assert_eq!(b.z_matrix.rank(), 4);
    }

    #[test]
    fn identity_satisfies_everything() {
        let i = Matrix::<Rational>::identity(3);
        let r = penrose_report(&i, &i).unwrap();
        assert_eq!(r.conditions, [true; 5]);
    }

    #[test]
    fn limit_on_path() {
        let g = fixtures::path_digraph();
        let schedule: Vec<Rational> = (0..=8).map(|e| integer(10i64.pow(e))).collect();
        let r = group_inverse_limit(&g, &schedule).unwrap();
        assert!(r.monotone());
        assert!(r.final_distance() < 1e-6);
        assert!(group_inverse_limit(&g, &[integer(10), integer(1)]).is_err());
    }

    #[test]
    fn float_mode_agrees() {
        let g = fixtures::path_digraph();
        let exact: Matrix<Rational> = moore_penrose(&g).unwrap();
        let approx: Matrix<f64> = moore_penrose(&g).unwrap();
        assert!(exact.map(|x| x.to_f64()).max_abs_diff(&approx) < 1e-9);
    }

    #[test]
    fn registry_names() {
        assert_eq!(
            group_inverse_routes::<Rational>().names(),
            ["shifted-inverse", "dense-forest"]
        );
    }
}
