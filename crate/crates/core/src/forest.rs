//! Forest matrices `Q_k`, their weights `sigma_k`, and everything derived from
//! them: the normalized matrices `J_k` and `J̄`, `Q(tau) = (I + tau L)^-1`, the
//! characteristic and annihilating polynomials of `L`, and the Geršgorin
//! discs of `L`.
//!
//! `Q_k[i][j]` is the total weight of spanning out forests with `k` arcs in
//! which `i` lies in the tree rooted at `j`. The sequence is produced by the
//! Faddeev-type recurrence
//!
//! ```text
//! Q_0 = I,   sigma_{k+1} = tr(L Q_k) / (k+1),   Q_{k+1} = sigma_{k+1} I - L Q_k
//! ```
//!
//! run up to `k = n - v`, where `v` is the out-forest dimension.

use std::sync::Arc;

use itertools::Itertools;

use crate::digraph::{analyze_structure, StructureReport, WeightedDigraph};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::registry::{Named, Registry};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct ForestSequence<T> {
    pub labels: Vec<String>,
    pub kirchhoff: Matrix<T>,
    pub structure: StructureReport,
    pub reach: Vec<Vec<bool>>,
    /// Out-forest dimension.
    pub v: usize,
    /// `sigma_0 ..= sigma_{n-v}`.
    pub sigmas: Vec<T>,
    /// `Q_0 ..= Q_{n-v}`.
    pub q: Vec<Matrix<T>>,
}

impl<T: Scalar> ForestSequence<T> {
    pub fn n(&self) -> usize {
        self.kirchhoff.order()
    }

    /// Number of arcs in a maximum out forest, `n - v`.
    pub fn top(&self) -> usize {
        self.n() - self.v
    }

    /// Total forest weight `s = sum sigma_k`.
    pub fn total_weight(&self) -> T {
        self.sigmas.iter().fold(T::zero(), |a, s| a + s.clone())
    }

    /// `s_k = sigma_0 + ... + sigma_k` for `k = 0..=n-v`.
    pub fn partial_sums(&self) -> Vec<T> {
        self.sigmas
            .iter()
            .scan(T::zero(), |acc, s| {
                *acc = acc.clone() + s.clone();
                Some(acc.clone())
            })
            .collect()
    }

    /// `J_k = Q_k / sigma_k`.
    pub fn normalized(&self, k: usize) -> Matrix<T> {
        self.q[k].scale(&(T::one() / self.sigmas[k].clone()))
    }

    /// `J̄ = Q_{n-v} / sigma_{n-v}`.
    pub fn jbar(&self) -> Matrix<T> {
        self.normalized(self.top())
    }
}

pub fn forest_sequence<T: Scalar>(g: &WeightedDigraph) -> Result<ForestSequence<T>> {
    let n = g.n();
    let l: Matrix<T> = g.kirchhoff();
    let structure = analyze_structure(g);
    let v = structure.out_dim;
    let top = n - v;
    let scale = l.max_abs().max(1.0);

    let mut sigmas = vec![T::one()];
    let mut q = vec![Matrix::identity(n)];
    for k in 0..top {
        let lq = &l * &q[k];
        let sigma = lq.trace() / T::from_i64(k as i64 + 1);
        if !sigma.definitely_gt(&T::zero()) {
            return Err(Error::Consistency(format!(
                "sigma_{} = {sigma} is not positive although n - v = {top}",
                k + 1
            )));
        }
        let next = &Matrix::identity(n).scale(&sigma) - &lq;
        let expected_trace = sigma.clone() * T::from_i64((n - k - 1) as i64);
        if !next.trace().near(&expected_trace, next.max_abs()) {
            return Err(Error::Consistency(format!(
                "tr(Q_{}) = {} but (n-k) sigma_k = {expected_trace}",
                k + 1,
                next.trace()
            )));
        }
        // each row of Q_{k+1} sums to sigma_{k+1} (the Perron root of Q_{k+1})
        if let Some(bad) = next.row_sums().iter().find(|s| !s.near(&sigma, next.max_abs())) {
            return Err(Error::Consistency(format!(
                "a row of Q_{} sums to {bad}, not sigma = {sigma}",
                k + 1
            )));
        }
        sigmas.push(sigma);
        q.push(next);
    }

    let last = &l * &q[top];
    if !last.approx_zero(scale * q[top].max_abs()) {
        return Err(Error::Consistency(format!(
            "L Q_(n-v) != 0 with v = {v}; the recurrence does not terminate there"
        )));
    }

    Ok(ForestSequence {
        labels: g.labels().to_vec(),
        reach: g.reachability(),
        kirchhoff: l,
        structure,
        v,
        sigmas,
        q,
    })
}

/// Evaluates `Q_k` as the polynomial `sum_{i=0..k} sigma_{k-i} (-L)^i`.
pub fn forest_matrix_polynomial<T: Scalar>(seq: &ForestSequence<T>, k: usize) -> Result<Matrix<T>> {
    if k > seq.top() {
        return Err(Error::out_of_range("k", k, format!("0..={}", seq.top())));
    }
    let n = seq.n();
    let minus_l = -&seq.kirchhoff;
    let mut acc = Matrix::identity(n).scale(&seq.sigmas[0]);
    for i in 1..=k {
        acc = &(&acc * &minus_l) + &Matrix::identity(n).scale(&seq.sigmas[i]);
    }
    Ok(acc)
}

/// One way of computing `Q(tau) = (I + tau L)^-1`.
pub trait QTauRoute<T: Scalar>: Named + Send + Sync {
    fn compute(&self, seq: &ForestSequence<T>, tau: &T) -> Result<Matrix<T>>;
}

/// Inverts `I + tau L` directly.
pub struct DirectInverse;

/// `s(tau)^-1 sum_k tau^k Q_k`, with `s(tau) = sum_k tau^k sigma_k`.
pub struct ForestSum;

/// `s(tau)^-1 sum_i s_{n-v-i}(tau) (-tau L)^i`, with `s_k(tau) = sum_{j<=k} tau^j sigma_j`.
pub struct KirchhoffPolynomial;

impl Named for DirectInverse {
    fn name(&self) -> &'static str {
        "inverse"
    }

    fn describe(&self) -> &'static str {
        "(I + tau L)^-1 by Gauss-Jordan elimination"
    }
}

impl<T: Scalar> QTauRoute<T> for DirectInverse {
    fn compute(&self, seq: &ForestSequence<T>, tau: &T) -> Result<Matrix<T>> {
        let n = seq.n();
        (&Matrix::identity(n) + &seq.kirchhoff.scale(tau)).inverse()
    }
}

impl Named for ForestSum {
    fn name(&self) -> &'static str {
        "forest-sum"
    }

    fn describe(&self) -> &'static str {
        "weighted sum of the forest matrices Q_k"
    }
}

impl<T: Scalar> QTauRoute<T> for ForestSum {
    fn compute(&self, seq: &ForestSequence<T>, tau: &T) -> Result<Matrix<T>> {
        let n = seq.n();
        let mut num = Matrix::zeros(n);
        let mut s = T::zero();
        let mut tau_k = T::one();
        for (q, sigma) in seq.q.iter().zip(&seq.sigmas) {
            num = &num + &q.scale(&tau_k);
            s = s + tau_k.clone() * sigma.clone();
            tau_k = tau_k * tau.clone();
        }
        Ok(num.scale(&(T::one() / s)))
    }
}

impl Named for KirchhoffPolynomial {
    fn name(&self) -> &'static str {
        "polynomial"
    }

    fn describe(&self) -> &'static str {
        "polynomial in L with partial forest-weight coefficients"
    }
}

impl<T: Scalar> QTauRoute<T> for KirchhoffPolynomial {
    fn compute(&self, seq: &ForestSequence<T>, tau: &T) -> Result<Matrix<T>> {
        let n = seq.n();
        let top = seq.top();
        // s_k(tau)
        let mut partial = Vec::with_capacity(top + 1);
        let mut acc = T::zero();
        let mut tau_k = T::one();
        for sigma in &seq.sigmas {
            acc = acc + tau_k.clone() * sigma.clone();
            partial.push(acc.clone());
            tau_k = tau_k * tau.clone();
        }
        let x = seq.kirchhoff.scale(&-tau.clone());
        // Horner over i = top..0 with coefficient s_{top-i}(tau)
        let mut poly = Matrix::identity(n).scale(&partial[0]);
        for i in (0..top).rev() {
            poly = &(&poly * &x) + &Matrix::identity(n).scale(&partial[top - i]);
        }
        Ok(poly.scale(&(T::one() / partial[top].clone())))
    }
}

pub fn qtau_routes<T: Scalar>() -> Registry<dyn QTauRoute<T>> {
    let mut r: Registry<dyn QTauRoute<T>> = Registry::new("Q(tau) route");
    r.register(Arc::new(ForestSum))
        .register(Arc::new(DirectInverse))
        .register(Arc::new(KirchhoffPolynomial));
    r
}

fn check_tau<T: Scalar>(tau: &T) -> Result<()> {
    if !tau.definitely_gt(&T::zero()) {
        return Err(Error::out_of_range("tau", tau, "tau > 0"));
    }
    Ok(())
}

/// Evaluates every registered route and fails unless they all agree.
pub fn q_tau_all_routes<T: Scalar>(
    seq: &ForestSequence<T>,
    tau: &T,
) -> Result<Vec<(&'static str, Matrix<T>)>> {
    check_tau(tau)?;
    let routes = qtau_routes::<T>();
    let results = routes
        .iter()
        .map(|r| Ok((r.name(), r.compute(seq, tau)?)))
        .collect::<Result<Vec<_>>>()?;
    let (first_name, first) = &results[0];
    for (name, m) in &results[1..] {
        if !m.approx_eq(first) {
            return Err(Error::Consistency(format!(
                "Q(tau) routes '{first_name}' and '{name}' disagree (max diff {})",
                m.max_abs_diff(first)
            )));
        }
    }
    Ok(results)
}

/// `Q(tau)` via the forest sum; debug builds cross-check against the other routes.
pub fn q_tau<T: Scalar>(seq: &ForestSequence<T>, tau: &T) -> Result<Matrix<T>> {
    check_tau(tau)?;
    if cfg!(debug_assertions) {
        let mut all = q_tau_all_routes(seq, tau)?;
        return Ok(all.swap_remove(0).1);
    }
    ForestSum.compute(seq, tau)
}

/// Normalized forest matrices `J_k` and the maximum-forest matrix `J̄`.
#[derive(Clone, Debug)]
pub struct NormalizedForests<T> {
    pub j: Vec<Matrix<T>>,
    pub jbar: Matrix<T>,
}

/// Builds `J_0 ..= J_{n-v}` and checks the structural facts `J̄` must satisfy:
/// row-stochastic, `J̄[i][j] != 0` iff `j` is in an undominated knot and `i` is
/// reachable from `j`, diagonal mass 1 on each knot, proportional columns
/// within a knot.
pub fn max_forest_matrix<T: Scalar>(seq: &ForestSequence<T>) -> Result<NormalizedForests<T>> {
    let j: Vec<Matrix<T>> = (0..=seq.top()).map(|k| seq.normalized(k)).collect();
    let jbar = j[seq.top()].clone();
    let n = seq.n();
    let one = T::one();
    let zero = T::zero();
    let fail = |msg: String| Err(Error::Consistency(msg));

    for (k, jk) in j.iter().enumerate() {
        if jk.entries().iter().any(|x| !x.at_least(&zero)) {
            return fail(format!("J_{k} has a negative entry"));
        }
        if jk.row_sums().iter().any(|s| !s.near(&one, 1.0)) {
            return fail(format!("J_{k} is not row-stochastic"));
        }
    }

    let in_knot = |c: usize| seq.structure.k_tilde.contains(&c);
    for r in 0..n {
        for c in 0..n {
            let nonzero = !jbar[(r, c)].near(&zero, 1.0);
            let expected = in_knot(c) && seq.reach[c][r];
            if nonzero != expected {
                return fail(format!(
                    "J̄[{r}][{c}] = {} contradicts the knot/reachability pattern",
                    jbar[(r, c)]
                ));
            }
        }
    }

    for knot in &seq.structure.undominated_knots {
        let mass = knot.iter().fold(T::zero(), |a, &v| a + jbar[(v, v)].clone());
        if !mass.near(&one, 1.0) {
            return fail(format!("diagonal of J̄ over knot {knot:?} sums to {mass}"));
        }
        for (&a, &b) in knot.iter().tuple_combinations() {
            for r in 0..n {
                let lhs = jbar[(r, b)].clone() * jbar[(a, a)].clone();
                let rhs = jbar[(r, a)].clone() * jbar[(b, b)].clone();
                if !lhs.near(&rhs, 1.0) {
                    return fail(format!("columns {a} and {b} of J̄ are not proportional"));
                }
            }
        }
    }

    Ok(NormalizedForests { j, jbar })
}

/// Sum of all principal minors of order `order`, by direct determinant expansion.
pub fn principal_minor_sum<T: Scalar>(m: &Matrix<T>, order: usize) -> T {
    if order == 0 {
        return T::one();
    }
    (0..m.order())
        .combinations(order)
        .fold(T::zero(), |acc, idx| acc + m.submatrix(&idx).det())
}

/// Coefficients of `p_L(x) = det(x I - L)`, highest power first:
/// the coefficient of `x^(n-i)` is `(-1)^i sigma_i`, zero past `i = n - v`.
/// Cross-checks `sigma_i` against principal-minor sums for `i <= 3`.
pub fn char_poly_coeffs<T: Scalar>(seq: &ForestSequence<T>) -> Result<Vec<T>> {
    let n = seq.n();
    let mut coeffs = vec![T::zero(); n + 1];
    for (i, sigma) in seq.sigmas.iter().enumerate() {
        coeffs[i] = if i % 2 == 0 { sigma.clone() } else { -sigma.clone() };
    }
    for i in 0..=n.min(3) {
        let minors = principal_minor_sum(&seq.kirchhoff, i);
        let sigma = seq.sigmas.get(i).cloned().unwrap_or_else(T::zero);
        if !minors.near(&sigma, sigma.to_f64().abs()) {
            return Err(Error::Consistency(format!(
                "E_{i}(L) = {minors} but sigma_{i} = {sigma}"
            )));
        }
    }
    Ok(coeffs)
}

/// Evaluates `p'_L(L) = L sum_i sigma_{n-v-i} (-L)^i`; fails unless the result is zero.
pub fn annihilating_poly_check<T: Scalar>(seq: &ForestSequence<T>) -> Result<Matrix<T>> {
    // the sum is exactly Q_{n-v} written as a polynomial
    let inner = forest_matrix_polynomial(seq, seq.top())?;
    let value = &seq.kirchhoff * &inner;
    let scale = seq.kirchhoff.max_abs().max(1.0) * inner.max_abs().max(1.0);
    if !value.approx_zero(scale) {
        return Err(Error::Consistency(
            "p'_L(L) is not the zero matrix".to_string(),
        ));
    }
    Ok(value)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Disc<T> {
    pub center: T,
    pub radius: T,
}

#[derive(Clone, Debug)]
pub struct GershgorinReport<T> {
    pub discs: Vec<Disc<T>>,
    /// Every disc passes through the origin.
    pub all_touch_zero: bool,
    /// Every disc lies in `Re z >= 0`.
    pub right_half_plane: bool,
    /// Real segment `[0, 2 min l_ii]` of the intersection of all discs.
    pub intersection_real: (T, T),
    /// The discs intersect in `{0}` alone.
    pub intersection_is_zero: bool,
    pub has_undominated_vertex: bool,
    /// The union of the discs is the disc with this centre and radius.
    pub union_disc: Disc<T>,
}

/// Row discs of `L`: centre `l_ii`, radius `l_ii`. Discs centred on the
/// nonnegative real axis and passing through 0 intersect in `{0}` exactly
/// when one of them is the degenerate disc `{0}`.
pub fn gershgorin<T: Scalar>(g: &WeightedDigraph) -> GershgorinReport<T> {
    let l: Matrix<T> = g.kirchhoff();
    let n = g.n();
    let discs: Vec<Disc<T>> = (0..n)
        .map(|i| {
            let radius = (0..n)
                .filter(|&j| j != i)
                .fold(T::zero(), |a, j| a + l[(i, j)].abs());
            Disc {
                center: l[(i, i)].clone(),
                radius,
            }
        })
        .collect();
    let zero = T::zero();
    let all_touch_zero = discs.iter().all(|d| d.center.near(&d.radius, 1.0));
    let right_half_plane = discs.iter().all(|d| d.center.at_least(&d.radius));
    let min_center = discs
        .iter()
        .map(|d| d.center.clone())
        .fold(None::<T>, |m, c| Some(match m {
            Some(m) if m <= c => m,
            _ => c,
        }))
        .unwrap_or_else(T::zero);
    let max_center = discs
        .iter()
        .map(|d| d.center.clone())
        .fold(T::zero(), |m, c| if c > m { c } else { m });
    GershgorinReport {
        intersection_is_zero: min_center.near(&zero, 1.0),
        intersection_real: (zero, min_center.clone() + min_center),
        has_undominated_vertex: (0..n).any(|v| g.indegree(v) == 0),
        union_disc: Disc {
            center: max_center.clone(),
            radius: max_center,
        },
        discs,
        all_touch_zero,
        right_half_plane,
    }
}
