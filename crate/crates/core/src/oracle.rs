//! Brute-force enumeration of spanning out forests.
//!
//! Every quantity here is computed straight from the definitions by walking
//! all arc subsets, so it serves as ground truth for the algebraic routines.
//! Only small digraphs are accepted (`n <= 10`, `|E| <= 20`).

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::digraph::{is_undominated_knot, Arc, WeightedDigraph};
use crate::error::{Error, Result};
use crate::forest::{forest_sequence, ForestSequence};
use crate::matrix::Matrix;
use crate::scalar::Rational;

pub const MAX_VERTICES: usize = 10;
pub const MAX_ARCS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest {
    /// Indices into the arc list of the digraph (or sub-digraph) enumerated.
    pub arcs: Vec<usize>,
    pub weight: Rational,
    /// `root[v]` is the root of the tree containing `v`.
    pub root: Vec<usize>,
}

impl Forest {
    pub fn roots(&self) -> Vec<usize> {
        (0..self.root.len()).filter(|&v| self.root[v] == v).collect()
    }

    /// Vertices of the tree rooted at `r`.
    pub fn tree(&self, r: usize) -> Vec<usize> {
        (0..self.root.len()).filter(|&v| self.root[v] == r).collect()
    }
}

#[derive(Clone, Debug)]
pub struct ForestFamily {
    pub k: usize,
    pub forests: Vec<Forest>,
    pub total_weight: Rational,
}

fn guard(g: &WeightedDigraph) -> Result<()> {
    if g.n() > MAX_VERTICES || g.arcs().len() > MAX_ARCS {
        return Err(Error::Guardrail {
            n: g.n(),
            arcs: g.arcs().len(),
        });
    }
    Ok(())
}

/// Checks the out-forest property for a chosen arc subset and, if it holds,
/// returns each vertex's root.
fn out_forest_roots(n: usize, arcs: &[Arc], chosen: &[usize]) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; n];
    for &e in chosen {
        let a = &arcs[e];
        if parent[a.head] != usize::MAX {
            return None; // indegree 2
        }
        parent[a.head] = a.tail;
    }
    let mut root = vec![usize::MAX; n];
    for start in 0..n {
        let mut v = start;
        let mut steps = 0;
        while parent[v] != usize::MAX {
            v = parent[v];
            steps += 1;
            if steps > n {
                return None; // circuit
            }
        }
        root[start] = v;
    }
    Some(root)
}

fn enumerate(n: usize, arcs: &[Arc], k: usize) -> Vec<Forest> {
    (0..arcs.len())
        .combinations(k)
        .filter_map(|chosen| {
            let root = out_forest_roots(n, arcs, &chosen)?;
            let weight = chosen
                .iter()
                .fold(Rational::one(), |w, &e| w * arcs[e].weight.clone());
            Some(Forest {
                arcs: chosen,
                weight,
                root,
            })
        })
        .collect()
}

fn total(forests: &[Forest]) -> Rational {
    forests.iter().fold(Rational::zero(), |a, f| a + f.weight.clone())
}

/// All spanning out forests of `g` with exactly `k` arcs.
pub fn enumerate_out_forests(g: &WeightedDigraph, k: usize) -> Result<ForestFamily> {
    guard(g)?;
    if k > g.arcs().len() {
        return Err(Error::out_of_range(
            "k",
            k,
            format!("0..={}", g.arcs().len()),
        ));
    }
    let forests = enumerate(g.n(), g.arcs(), k);
    Ok(ForestFamily {
        k,
        total_weight: total(&forests),
        forests,
    })
}

/// Maximum out forests of `g`, together with their arc count.
pub fn maximum_out_forests(g: &WeightedDigraph) -> Result<ForestFamily> {
    guard(g)?;
    let (k, forests) = max_forests(g.n(), g.arcs());
    Ok(ForestFamily {
        k,
        total_weight: total(&forests),
        forests,
    })
}

fn max_forests(n: usize, arcs: &[Arc]) -> (usize, Vec<Forest>) {
    for k in (0..=arcs.len().min(n - 1)).rev() {
        let f = enumerate(n, arcs, k);
        if !f.is_empty() {
            return (k, f);
        }
    }
    unreachable!("the empty forest always exists")
}

/// `Q_k` by enumeration: entry (i, j) is the weight of k-arc out forests in
/// which `i` lies in the tree rooted at `j`.
pub fn oracle_qk(g: &WeightedDigraph, k: usize) -> Result<Matrix<Rational>> {
    let fam = enumerate_out_forests(g, k)?;
    let mut q: Matrix<Rational> = Matrix::zeros(g.n());
    for f in &fam.forests {
        for (i, &r) in f.root.iter().enumerate() {
            q[(i, r)] = q[(i, r)].clone() + f.weight.clone();
        }
    }
    Ok(q)
}

/// Both sides of the knot factorization of `J̄`, plus the auxiliary identities.
#[derive(Clone, Debug)]
pub struct KnotFactorization {
    /// `J̄[i][j]` from the forest recurrence.
    pub lhs: Rational,
    /// `w(T^j) w(P^{K->i}) / sigma_{n-v}` by enumeration.
    pub rhs: Rational,
    /// `w(T^j)`: spanning trees of the knot diverging from `j`.
    pub trees_from_j: Rational,
    /// `w(T)`: all spanning diverging trees of the knot.
    pub trees_total: Rational,
    /// If `i` is in `K+`: whether `J̄[i][j] = J̄[j][j] = w(T^j)/w(T)` held.
    pub k_plus_clause: Option<bool>,
    /// Column proportionality against every other knot vertex.
    pub columns_proportional: bool,
}

impl KnotFactorization {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs && self.k_plus_clause != Some(false) && self.columns_proportional
    }
}

/// Evaluates the factorization of `J̄[i][j]` over an undominated knot `knot`
/// containing `j`. Reachability of `i` from the knot is judged inside each
/// forest; vertices of the knot count as reachable from it.
pub fn knot_factorization_check(
    g: &WeightedDigraph,
    knot: &[usize],
    j: usize,
    i: usize,
) -> Result<KnotFactorization> {
    guard(g)?;
    if i >= g.n() || j >= g.n() {
        return Err(Error::NoSuchVertex(i.max(j)));
    }
    if !is_undominated_knot(g, knot) {
        return Err(Error::Precondition(format!(
            "{knot:?} is not an undominated knot"
        )));
    }
    if !knot.contains(&j) {
        return Err(Error::Precondition(format!("vertex {j} is not in the knot")));
    }
    let seq: ForestSequence<Rational> = forest_sequence(g)?;
    let jbar = seq.jbar();
    let n = g.n();
    let in_knot = |v: usize| knot.contains(&v);

    // Spanning diverging trees of the restriction to the knot (as spanning
    // forests of the full vertex set whose non-knot vertices stay isolated).
    let knot_arcs: Vec<Arc> = g
        .arcs()
        .iter()
        .filter(|a| in_knot(a.tail) && in_knot(a.head))
        .cloned()
        .collect();
    let trees = enumerate(n, &knot_arcs, knot.len() - 1);
    let tree_weight_from = |r: usize| {
        trees
            .iter()
            .filter(|t| t.root[r] == r && knot.iter().all(|&v| t.root[v] == r))
            .fold(Rational::zero(), |a, t| a + t.weight.clone())
    };
    let trees_from_j = tree_weight_from(j);
    let trees_total = knot
        .iter()
        .fold(Rational::zero(), |a, &r| a + tree_weight_from(r));

    // Maximum out forests of the digraph with the knot's internal arcs removed.
    let rest_arcs: Vec<Arc> = g
        .arcs()
        .iter()
        .filter(|a| !(in_knot(a.tail) && in_knot(a.head)))
        .cloned()
        .collect();
    let (_, rest_max) = max_forests(n, &rest_arcs);
    let p_to_i = rest_max
        .iter()
        .filter(|f| in_knot(f.root[i]))
        .fold(Rational::zero(), |a, f| a + f.weight.clone());

    let sigma_top = seq.sigmas[seq.top()].clone();
    let rhs = trees_from_j.clone() * p_to_i / sigma_top;
    let lhs = jbar[(i, j)].clone();

    let knot_index = seq
        .structure
        .undominated_knots
        .iter()
        .position(|k| {
            let mut a = k.clone();
            let mut b = knot.to_vec();
            a.sort_unstable();
            b.sort_unstable();
            a == b
        })
        .ok_or_else(|| Error::Consistency("knot missing from structure report".into()))?;
    let k_plus_clause = seq.structure.k_plus[knot_index].contains(&i).then(|| {
        let ratio = trees_from_j.clone() / trees_total.clone();
        jbar[(i, j)] == jbar[(j, j)] && jbar[(j, j)] == ratio
    });

    let columns_proportional = knot.iter().all(|&other| {
        let ratio = tree_weight_from(other) / trees_from_j.clone();
        (0..n).all(|r| jbar[(r, other)] == ratio.clone() * jbar[(r, j)].clone())
    });

    Ok(KnotFactorization {
        lhs,
        rhs,
        trees_from_j,
        trees_total,
        k_plus_clause,
        columns_proportional,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseForestReport {
    /// Per vertex: some (n-v-1)-arc out forest has it as a root.
    pub root_everywhere: Vec<bool>,
    /// Per arc: some out forest with n-v-1 or n-v arcs contains it.
    pub arc_covered: Vec<bool>,
}

impl DenseForestReport {
    pub fn holds(&self) -> bool {
        self.root_everywhere.iter().all(|&b| b) && self.arc_covered.iter().all(|&b| b)
    }
}

/// Enumerates dense forests (n-v-1 and n-v arcs) and checks that every vertex
/// is a root of some (n-v-1)-arc forest and every arc lies in some dense forest.
pub fn dense_forest_checks(g: &WeightedDigraph) -> Result<DenseForestReport> {
    guard(g)?;
    let max = maximum_out_forests(g)?;
    if max.k == 0 {
        // No arcs: only the empty forest exists, every vertex is a root and
        // there is no arc to cover.
        return Ok(DenseForestReport {
            root_everywhere: vec![true; g.n()],
            arc_covered: Vec::new(),
        });
    }
    let below = enumerate_out_forests(g, max.k - 1)?;
    let root_everywhere = (0..g.n())
        .map(|v| below.forests.iter().any(|f| f.root[v] == v))
        .collect();
    let arc_covered = (0..g.arcs().len())
        .map(|e| {
            below
                .forests
                .iter()
                .chain(&max.forests)
                .any(|f| f.arcs.contains(&e))
        })
        .collect();
    Ok(DenseForestReport {
        root_everywhere,
        arc_covered,
    })
}

/// For every maximum out forest `F` and every `i`, `j` in different trees of
/// `F` with `j` a root, checks that `g` has no path from `i` to `j`.
pub fn max_forest_reachability_check(g: &WeightedDigraph) -> Result<bool> {
    let max = maximum_out_forests(g)?;
    let reach = g.reachability();
    Ok(max.forests.iter().all(|f| {
        f.roots().into_iter().all(|j| {
            (0..g.n()).all(|i| f.root[i] == j || !reach[i][j])
        })
    }))
}
