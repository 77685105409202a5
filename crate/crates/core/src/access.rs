//! Accessibility measures built from forest matrices, and a harness that
//! checks them against the classical proximity conditions.
//!
//! Two families are provided:
//!
//! * **forest** (parameter `tau > 0`): `P1 = Q(tau)^T`, the out-forest
//!   accessibility, and `P2`, whose `(i, j)` entry is the weight of in forests
//!   in which `i` lies in a tree converging to the sink `j` (that is, `Q(tau)`
//!   of the reversed digraph);
//! * **dense** (parameter `0 < alpha < sigma_{n-v} / sigma_{n-v-1}`):
//!   `R(alpha) = (L + alpha J̄)^-1`, `P1 = R^T`, `P2 = R` of the reversed digraph.
//!
//! In both cases `P3 = (P1 + P1^T + P2 + P2^T) / 4` is the symmetric index on
//! which the triangle inequality is tested.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::digraph::{check_vertex, WeightedDigraph};
use crate::error::{Error, Result};
use crate::forest::{forest_sequence, q_tau, ForestSequence};
use crate::matrix::Matrix;
use crate::registry::{Named, Registry};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    Forest,
    Dense,
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureKind::Forest => "forest",
            MeasureKind::Dense => "dense",
        })
    }
}

#[derive(Clone, Debug)]
pub struct AccessibilityMatrices<T> {
    pub kind: MeasureKind,
    pub labels: Vec<String>,
    pub p1: Matrix<T>,
    pub p2: Matrix<T>,
    pub p3: Matrix<T>,
    /// `tau` (forest) or `alpha` (dense).
    pub parameter: T,
    /// Dense kind only: `sigma_{n-v} / sigma_{n-v-1}` of the digraph and of its reverse.
    pub alpha_bound: Option<(T, T)>,
}

impl<T: Scalar> AccessibilityMatrices<T> {
    pub fn get(&self, which: Which) -> &Matrix<T> {
        match which {
            Which::P1 => &self.p1,
            Which::P2 => &self.p2,
            Which::P3 => &self.p3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Which {
    P1,
    P2,
    P3,
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn symmetrized<T: Scalar>(p1: &Matrix<T>, p2: &Matrix<T>) -> Matrix<T> {
    let sum = &(&(p1 + &p1.transpose()) + p2) + &p2.transpose();
    sum.scale(&(T::one() / T::from_i64(4)))
}

/// Forest accessibility at `tau > 0`.
pub fn forest_accessibility<T: Scalar>(
    g: &WeightedDigraph,
    tau: &T,
) -> Result<AccessibilityMatrices<T>> {
    let q = q_tau(&forest_sequence::<T>(g)?, tau)?;
    let q_rev = q_tau(&forest_sequence::<T>(&g.reverse())?, tau)?;
    let p1 = q.transpose();
    let p2 = q_rev;
    let p3 = symmetrized(&p1, &p2);
    Ok(AccessibilityMatrices {
        kind: MeasureKind::Forest,
        labels: g.labels().to_vec(),
        p1,
        p2,
        p3,
        parameter: tau.clone(),
        alpha_bound: None,
    })
}

/// `sigma_{n-v} / sigma_{n-v-1}`; needs `n - v >= 1`.
pub fn dense_alpha_bound<T: Scalar>(seq: &ForestSequence<T>) -> Result<T> {
    let top = seq.top();
    if top == 0 {
        return Err(Error::Precondition(
            "dense accessibility needs at least one arc in a maximum out forest (n - v >= 1)"
                .to_string(),
        ));
    }
    Ok(seq.sigmas[top].clone() / seq.sigmas[top - 1].clone())
}

/// `R(alpha) = (L + alpha J̄)^-1`, by inversion and by the combination
/// `Q_{n-v-1} / sigma_{n-v} + (1/alpha - sigma_{n-v-1}/sigma_{n-v}) J̄`.
pub fn dense_resolvent<T: Scalar>(seq: &ForestSequence<T>, alpha: &T) -> Result<Matrix<T>> {
    let top = seq.top();
    let jbar = seq.jbar();
    let inverted = (&seq.kirchhoff + &jbar.scale(alpha)).inverse()?;
    let s_top = seq.sigmas[top].clone();
    let coeff = T::one() / alpha.clone() - seq.sigmas[top - 1].clone() / s_top.clone();
    let combined = &seq.q[top - 1].scale(&(T::one() / s_top)) + &jbar.scale(&coeff);
    if !inverted.approx_eq(&combined) {
        return Err(Error::Consistency(format!(
            "R(alpha): inversion and dense-forest combination disagree (max diff {})",
            inverted.max_abs_diff(&combined)
        )));
    }
    Ok(inverted)
}

/// Dense-forest accessibility; `alpha` must lie strictly below the bound of
/// both the digraph and its reverse (the latter governs `P2`).
pub fn dense_accessibility<T: Scalar>(
    g: &WeightedDigraph,
    alpha: &T,
) -> Result<AccessibilityMatrices<T>> {
    let seq = forest_sequence::<T>(g)?;
    let rev = forest_sequence::<T>(&g.reverse())?;
    let bound = dense_alpha_bound(&seq)?;
    let bound_rev = dense_alpha_bound(&rev)?;
    let ok = alpha.definitely_gt(&T::zero())
        && bound.definitely_gt(alpha)
        && bound_rev.definitely_gt(alpha);
    if !ok {
        return Err(Error::out_of_range(
            "alpha",
            alpha,
            format!("0 < alpha < {bound} (reverse digraph: < {bound_rev})"),
        ));
    }
    let p1 = dense_resolvent(&seq, alpha)?.transpose();
    let p2 = dense_resolvent(&rev, alpha)?;
    let p3 = symmetrized(&p1, &p2);
    Ok(AccessibilityMatrices {
        kind: MeasureKind::Dense,
        labels: g.labels().to_vec(),
        p1,
        p2,
        p3,
        parameter: alpha.clone(),
        alpha_bound: Some((bound, bound_rev)),
    })
}

pub trait AccessibilityMeasure<T: Scalar>: Named + Send + Sync {
    fn kind(&self) -> MeasureKind;

    fn matrices(&self, g: &WeightedDigraph, parameter: &T) -> Result<AccessibilityMatrices<T>>;
}

pub struct ForestMeasure;

pub struct DenseMeasure;

impl Named for ForestMeasure {
    fn name(&self) -> &'static str {
        "forest"
    }

    fn describe(&self) -> &'static str {
        "out/in forest accessibility Q(tau)^T, parameter tau > 0"
    }
}

impl<T: Scalar> AccessibilityMeasure<T> for ForestMeasure {
    fn kind(&self) -> MeasureKind {
        MeasureKind::Forest
    }

    fn matrices(&self, g: &WeightedDigraph, parameter: &T) -> Result<AccessibilityMatrices<T>> {
        forest_accessibility(g, parameter)
    }
}

impl Named for DenseMeasure {
    fn name(&self) -> &'static str {
        "dense"
    }

    fn describe(&self) -> &'static str {
        "dense-forest accessibility (L + alpha J̄)^-T, 0 < alpha < sigma_{n-v}/sigma_{n-v-1}"
    }
}

impl<T: Scalar> AccessibilityMeasure<T> for DenseMeasure {
    fn kind(&self) -> MeasureKind {
        MeasureKind::Dense
    }

    fn matrices(&self, g: &WeightedDigraph, parameter: &T) -> Result<AccessibilityMatrices<T>> {
        dense_accessibility(g, parameter)
    }
}

pub fn accessibility_measures<T: Scalar>() -> Registry<dyn AccessibilityMeasure<T>> {
    let mut r: Registry<dyn AccessibilityMeasure<T>> = Registry::new("accessibility measure");
    r.register(Arc::new(ForestMeasure))
        .register(Arc::new(DenseMeasure));
    r
}

/// Checks `P2(G) = P1(reverse G)^T` and `P1(G) = P2(reverse G)^T`.
pub fn duality_holds<T: Scalar>(
    measure: &dyn AccessibilityMeasure<T>,
    g: &WeightedDigraph,
    parameter: &T,
) -> Result<bool> {
    let a = measure.matrices(g, parameter)?;
    let b = measure.matrices(&g.reverse(), parameter)?;
    Ok(a.p2.approx_eq(&b.p1.transpose()) && a.p1.approx_eq(&b.p2.transpose()))
}

// ---------------------------------------------------------------------------
// Axiom harness

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    Nonnegativity,
    DiagonalMaximality,
    Disconnection,
    Triangle,
    Transit,
    Monotonicity,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Nonnegativity => "nonnegativity",
            Condition::DiagonalMaximality => "diagonal-maximality",
            Condition::Disconnection => "disconnection",
            Condition::Triangle => "triangle",
            Condition::Transit => "transit",
            Condition::Monotonicity => "monotonicity",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// Vertices and the matrix values that decide one instance of a condition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub vertices: Vec<String>,
    pub values: Vec<f64>,
    pub exact: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Witness {
    fn new<T: Scalar>(labels: &[String], vertices: &[usize], values: &[&T]) -> Self {
        Witness {
            vertices: vertices.iter().map(|&v| labels[v].clone()).collect(),
            values: values.iter().map(|x| x.to_f64()).collect(),
            exact: values.iter().map(|x| x.to_exact_string()).collect(),
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is(&self, vertices: &[&str]) -> bool {
        self.vertices.iter().map(String::as_str).eq(vertices.iter().copied())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomRecord {
    pub measure: String,
    pub condition: Condition,
    pub item: String,
    pub strict: bool,
    pub verdict: Verdict,
    /// First violation found, if any.
    pub witness: Option<Witness>,
    /// Number of instances the condition was evaluated on.
    pub checked: usize,
    #[serde(skip)]
    pub violations: Vec<Witness>,
}

impl AxiomRecord {
    fn new(
        measure: &str,
        condition: Condition,
        item: &str,
        strict: bool,
        checked: usize,
        violations: Vec<Witness>,
    ) -> Self {
        AxiomRecord {
            measure: measure.to_string(),
            condition,
            item: item.to_string(),
            strict,
            verdict: if violations.is_empty() {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            witness: violations.first().cloned(),
            checked,
            violations,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn violation_at(&self, vertices: &[&str]) -> Option<&Witness> {
        self.violations.iter().find(|w| w.is(vertices))
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AxiomReport {
    pub records: Vec<AxiomRecord>,
}

impl AxiomReport {
    pub fn find(&self, measure: &str, condition: Condition, item: &str) -> Option<&AxiomRecord> {
        self.records
            .iter()
            .find(|r| r.measure == measure && r.condition == condition && r.item == item)
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(AxiomRecord::passed)
    }
}

/// `a > b` in strict mode, `a >= b` otherwise.
fn dominates<T: Scalar>(strict: bool, a: &T, b: &T) -> bool {
    if strict {
        a.definitely_gt(b)
    } else {
        a.at_least(b)
    }
}

fn check_order<T: Scalar>(m: &Matrix<T>, g: &WeightedDigraph) -> Result<()> {
    if m.order() != g.n() {
        return Err(Error::OrderMismatch(m.order(), g.n()));
    }
    Ok(())
}

pub fn check_nonnegativity<T: Scalar>(
    name: &str,
    m: &Matrix<T>,
    labels: &[String],
) -> AxiomRecord {
    let n = m.order();
    let mut bad = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !m[(i, j)].at_least(&T::zero()) {
                bad.push(Witness::new(labels, &[i, j], &[&m[(i, j)]]));
            }
        }
    }
    AxiomRecord::new(name, Condition::Nonnegativity, "", false, n * n, bad)
}

/// Item 1: `p_ii > p_ij`; item 2: `p_ii > p_ji` (distinct `i`, `j`).
pub fn check_diagonal_maximality<T: Scalar>(
    name: &str,
    m: &Matrix<T>,
    labels: &[String],
    strict: bool,
) -> [AxiomRecord; 2] {
    let n = m.order();
    let (mut item1, mut item2) = (Vec::new(), Vec::new());
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if !dominates(strict, &m[(i, i)], &m[(i, j)]) {
                item1.push(Witness::new(labels, &[i, j], &[&m[(i, i)], &m[(i, j)]]));
            }
            if !dominates(strict, &m[(i, i)], &m[(j, i)]) {
                item2.push(Witness::new(labels, &[i, j], &[&m[(i, i)], &m[(j, i)]]));
            }
        }
    }
    let checked = n * (n - 1);
    [
        AxiomRecord::new(name, Condition::DiagonalMaximality, "1", strict, checked, item1),
        AxiomRecord::new(name, Condition::DiagonalMaximality, "2", strict, checked, item2),
    ]
}

/// `p_ij = 0` iff `j` is unreachable from `i`.
pub fn check_disconnection<T: Scalar>(
    name: &str,
    m: &Matrix<T>,
    g: &WeightedDigraph,
) -> Result<AxiomRecord> {
    check_order(m, g)?;
    let reach = g.reachability();
    let labels = g.labels();
    let n = m.order();
    let mut bad = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let zero = m[(i, j)].is_negligible();
            if zero == reach[i][j] {
                let note = if zero {
                    "zero although reachable"
                } else {
                    "nonzero although unreachable"
                };
                bad.push(Witness::new(labels, &[i, j], &[&m[(i, j)]]).with_note(note));
            }
        }
    }
    Ok(AxiomRecord::new(name, Condition::Disconnection, "", false, n * n, bad))
}

/// `p_ij + p_ik - p_jk <= p_ii`, strict when `j = k != i` (in strict mode).
/// Witness vertices are `(i, j, k)`, values `(p_ij, p_ik, p_jk, p_ii)`.
pub fn check_triangle<T: Scalar>(
    name: &str,
    m: &Matrix<T>,
    labels: &[String],
    strict: bool,
) -> Result<AxiomRecord> {
    if !m.is_symmetric() {
        return Err(Error::Asymmetric);
    }
    let n = m.order();
    let mut bad = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = m[(i, j)].clone() + m[(i, k)].clone() - m[(j, k)].clone();
                let strict_here = strict && j == k && i != j;
                if !dominates(strict_here, &m[(i, i)], &lhs) {
                    bad.push(Witness::new(
                        labels,
                        &[i, j, k],
                        &[&m[(i, j)], &m[(i, k)], &m[(j, k)], &m[(i, i)]],
                    ));
                }
            }
        }
    }
    Ok(AxiomRecord::new(name, Condition::Triangle, "", strict, n * n * n, bad))
}

/// Triples `(i, k, t)` with `i != k != t`, `i != t`, a path `i -> k`, a path
/// `i -> t`, and every `i -> t` path passing through `k`.
pub fn transit_triples(g: &WeightedDigraph) -> Vec<(usize, usize, usize)> {
    let n = g.n();
    let reach = g.reachability();
    let mut out = Vec::new();
    for i in 0..n {
        for k in (0..n).filter(|&k| k != i && reach[i][k]) {
            let avoiding = g.reachable_avoiding(i, k);
            for t in (0..n).filter(|&t| t != i && t != k) {
                if reach[i][t] && !avoiding[t] {
                    out.push((i, k, t));
                }
            }
        }
    }
    out
}

/// Item 1: `p_ik > p_it`; item 2: `p_kt > p_it`, over all transit triples.
/// Witness vertices `(i, k, t)`; values `(p_ik, p_it)` resp. `(p_kt, p_it)`.
pub fn check_transit<T: Scalar>(
    name: &str,
    m: &Matrix<T>,
    g: &WeightedDigraph,
    strict: bool,
) -> Result<[AxiomRecord; 2]> {
    check_order(m, g)?;
    let labels = g.labels();
    let triples = transit_triples(g);
    let (mut item1, mut item2) = (Vec::new(), Vec::new());
    for &(i, k, t) in &triples {
        if !dominates(strict, &m[(i, k)], &m[(i, t)]) {
            item1.push(Witness::new(labels, &[i, k, t], &[&m[(i, k)], &m[(i, t)]]));
        }
        if !dominates(strict, &m[(k, t)], &m[(i, t)]) {
            item2.push(Witness::new(labels, &[i, k, t], &[&m[(k, t)], &m[(i, t)]]));
        }
    }
    Ok([
        AxiomRecord::new(name, Condition::Transit, "1", strict, triples.len(), item1),
        AxiomRecord::new(name, Condition::Transit, "2", strict, triples.len(), item2),
    ])
}

/// All static conditions: nonnegativity, diagonal maximality, disconnection
/// and transit for `P1` and `P2`; the triangle inequality for `P3`.
pub fn axiom_check<T: Scalar>(
    a: &AccessibilityMatrices<T>,
    g: &WeightedDigraph,
    strict: bool,
) -> Result<AxiomReport> {
    let labels = g.labels();
    let mut records = Vec::new();
    for which in [Which::P1, Which::P2] {
        let name = which.to_string();
        let m = a.get(which);
        check_order(m, g)?;
        records.push(check_nonnegativity(&name, m, labels));
        records.extend(check_diagonal_maximality(&name, m, labels, strict));
        records.push(check_disconnection(&name, m, g)?);
        records.extend(check_transit(&name, m, g, strict)?);
    }
    records.push(check_triangle("P3", &a.p3, labels, strict)?);
    Ok(AxiomReport { records })
}

// ---------------------------------------------------------------------------
// Monotonicity

/// Increments of `P1(tau)` and `P2(tau)` when the weight of arc `k -> t`
/// grows by `delta`, by the rank-one closed forms and by recomputation.
#[derive(Clone, Debug)]
pub struct DeltaReport<T> {
    pub arc: (usize, usize),
    pub delta: T,
    pub tau: T,
    /// `p1_tj (p1_ik - p1_it)`.
    pub numerator_p1: Matrix<T>,
    /// `(delta tau)^-1 + p1_tt - p1_tk`.
    pub denominator_p1: T,
    pub closed_p1: Matrix<T>,
    pub recomputed_p1: Matrix<T>,
    /// `p2_ik (p2_tj - p2_kj)`.
    pub numerator_p2: Matrix<T>,
    /// `(delta tau)^-1 + p2_kk - p2_tk`.
    pub denominator_p2: T,
    pub closed_p2: Matrix<T>,
    pub recomputed_p2: Matrix<T>,
}

fn check_arc(g: &WeightedDigraph, (k, t): (usize, usize)) -> Result<()> {
    check_vertex(g, k)?;
    check_vertex(g, t)?;
    if k == t {
        return Err(Error::Loop(g.labels()[k].clone()));
    }
    Ok(())
}

fn check_delta(delta: &Rational) -> Result<()> {
    if *delta <= Rational::from_integer(0.into()) {
        return Err(Error::out_of_range("delta", delta, "delta > 0"));
    }
    Ok(())
}

/// Closed-form and recomputed increments of the forest measures; fails if the two disagree.
/// The arc may be absent from `g` (base weight zero).
pub fn monotonicity_delta<T: Scalar>(
    g: &WeightedDigraph,
    tau: &T,
    arc: (usize, usize),
    delta: &Rational,
) -> Result<DeltaReport<T>> {
    check_arc(g, arc)?;
    check_delta(delta)?;
    let (k, t) = arc;
    let n = g.n();
    let base = forest_accessibility::<T>(g, tau)?;
    let perturbed = forest_accessibility::<T>(&g.with_increased_weight(k, t, delta)?, tau)?;
    let inv = T::one() / (T::from_rational(delta) * tau.clone());
    let (p1, p2) = (&base.p1, &base.p2);

    let numerator_p1 = Matrix::from_fn(n, |i, j| {
        p1[(t, j)].clone() * (p1[(i, k)].clone() - p1[(i, t)].clone())
    });
    let denominator_p1 = inv.clone() + p1[(t, t)].clone() - p1[(t, k)].clone();
    let numerator_p2 = Matrix::from_fn(n, |i, j| {
        p2[(i, k)].clone() * (p2[(t, j)].clone() - p2[(k, j)].clone())
    });
    let denominator_p2 = inv + p2[(k, k)].clone() - p2[(t, k)].clone();

    let report = DeltaReport {
        arc,
        delta: T::from_rational(delta),
        tau: tau.clone(),
        closed_p1: numerator_p1.scale(&(T::one() / denominator_p1.clone())),
        recomputed_p1: &perturbed.p1 - p1,
        closed_p2: numerator_p2.scale(&(T::one() / denominator_p2.clone())),
        recomputed_p2: &perturbed.p2 - p2,
        numerator_p1,
        denominator_p1,
        numerator_p2,
        denominator_p2,
    };
    for (which, closed, recomputed) in [
        ("P1", &report.closed_p1, &report.recomputed_p1),
        ("P2", &report.closed_p2, &report.recomputed_p2),
    ] {
        if !closed.approx_eq(recomputed) {
            return Err(Error::Consistency(format!(
                "{which}: closed-form increment differs from recomputation (max diff {})",
                closed.max_abs_diff(recomputed)
            )));
        }
    }
    Ok(report)
}

/// Monotonicity items judged from an increment matrix `d` for arc `k -> t`
/// of the (already perturbed) digraph `g`:
///
/// * `1a`: `d_kt > 0`; `1b`: `d_kt > d_ij` for every `(i, j) != (k, t)`;
/// * for `i` reachable from `k` only through `t`: `2a` `d_kt > d_ki`, `2b` `d_ki > d_ti`;
/// * for `i` reaching `t` only through `k`: `3a` `d_kt > d_it`, `3b` `d_it > d_ik`.
pub fn judge_monotonicity<T: Scalar>(
    name: &str,
    d: &Matrix<T>,
    g: &WeightedDigraph,
    arc: (usize, usize),
    strict: bool,
) -> Result<Vec<AxiomRecord>> {
    check_order(d, g)?;
    check_arc(g, arc)?;
    let (k, t) = arc;
    let n = g.n();
    let labels = g.labels();
    let reach = g.reachability();
    let dkt = &d[(k, t)];
    let w = |vs: &[usize], xs: &[&T]| Witness::new(labels, vs, xs);

    let mut item1a = Vec::new();
    if !dominates(strict, dkt, &T::zero()) {
        item1a.push(w(&[k, t], &[dkt]));
    }
    let mut item1b = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if (i, j) != (k, t) && !dominates(strict, dkt, &d[(i, j)]) {
                item1b.push(w(&[k, t, i, j], &[dkt, &d[(i, j)]]));
            }
        }
    }

    let from_k_avoiding_t = g.reachable_avoiding(k, t);
    let item2: Vec<usize> = (0..n)
        .filter(|&i| i != k && i != t && reach[k][t] && reach[k][i] && !from_k_avoiding_t[i])
        .collect();
    let (mut item2a, mut item2b) = (Vec::new(), Vec::new());
    for &i in &item2 {
        if !dominates(strict, dkt, &d[(k, i)]) {
            item2a.push(w(&[k, t, i], &[dkt, &d[(k, i)]]));
        }
        if !dominates(strict, &d[(k, i)], &d[(t, i)]) {
            item2b.push(w(&[k, t, i], &[&d[(k, i)], &d[(t, i)]]));
        }
    }

    let item3: Vec<usize> = (0..n)
        .filter(|&i| {
            i != k && i != t && reach[i][k] && reach[i][t] && !g.reachable_avoiding(i, k)[t]
        })
        .collect();
    let (mut item3a, mut item3b) = (Vec::new(), Vec::new());
    for &i in &item3 {
        if !dominates(strict, dkt, &d[(i, t)]) {
            item3a.push(w(&[k, t, i], &[dkt, &d[(i, t)]]));
        }
        if !dominates(strict, &d[(i, t)], &d[(i, k)]) {
            item3b.push(w(&[k, t, i], &[&d[(i, t)], &d[(i, k)]]));
        }
    }

    let m = Condition::Monotonicity;
    Ok(vec![
        AxiomRecord::new(name, m, "1a", strict, 1, item1a),
        AxiomRecord::new(name, m, "1b", strict, n * n - 1, item1b),
        AxiomRecord::new(name, m, "2a", strict, item2.len(), item2a),
        AxiomRecord::new(name, m, "2b", strict, item2.len(), item2b),
        AxiomRecord::new(name, m, "3a", strict, item3.len(), item3a),
        AxiomRecord::new(name, m, "3b", strict, item3.len(), item3b),
    ])
}

/// Increments of `P1` and `P2` of any registered measure by recomputation.
pub fn recomputed_increments<T: Scalar>(
    measure: &dyn AccessibilityMeasure<T>,
    g: &WeightedDigraph,
    parameter: &T,
    arc: (usize, usize),
    delta: &Rational,
) -> Result<(WeightedDigraph, Matrix<T>, Matrix<T>)> {
    check_arc(g, arc)?;
    check_delta(delta)?;
    let perturbed = g.with_increased_weight(arc.0, arc.1, delta)?;
    let before = measure.matrices(g, parameter)?;
    let after = measure.matrices(&perturbed, parameter)?;
    Ok((perturbed, &after.p1 - &before.p1, &after.p2 - &before.p2))
}

/// Monotonicity over every existing arc with `delta` in `{1, 1/2}`; each item
/// fails if any sampled increase violates it. Witness vertices start with the arc.
pub fn monotonicity_sweep<T: Scalar>(
    measure: &dyn AccessibilityMeasure<T>,
    g: &WeightedDigraph,
    parameter: &T,
    strict: bool,
) -> Result<AxiomReport> {
    let deltas = [Rational::from_integer(1.into()), Rational::new(1.into(), 2.into())];
    let mut merged: Vec<AxiomRecord> = Vec::new();
    for a in g.arcs() {
        for delta in &deltas {
            let (perturbed, d1, d2) =
                recomputed_increments(measure, g, parameter, (a.tail, a.head), delta)?;
            for (name, d) in [("P1", &d1), ("P2", &d2)] {
                for rec in judge_monotonicity(name, d, &perturbed, (a.tail, a.head), strict)? {
                    match merged
                        .iter_mut()
                        .find(|r| r.measure == rec.measure && r.item == rec.item)
                    {
                        Some(m) => {
                            m.checked += rec.checked;
                            m.violations.extend(rec.violations);
                        }
                        None => merged.push(rec),
                    }
                }
            }
        }
    }
    for r in &mut merged {
        r.verdict = if r.violations.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        r.witness = r.violations.first().cloned();
    }
    Ok(AxiomReport { records: merged })
}
