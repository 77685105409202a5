//! Weighted digraphs, their Kirchhoff matrices and structural analysis.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{parse_rational, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub weight: Rational,
}

/// A loop-free digraph with strictly positive arc weights and at most one
/// arc per ordered vertex pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedDigraph {
    labels: Vec<String>,
    arcs: Vec<Arc>,
}

impl WeightedDigraph {
    pub fn new(labels: Vec<String>, arcs: Vec<Arc>) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::TooFewVertices(labels.len()));
        }
        let n = labels.len();
        let mut seen = std::collections::HashSet::new();
        for a in &arcs {
            if a.tail >= n || a.head >= n {
                return Err(Error::NoSuchVertex(a.tail.max(a.head)));
            }
            if a.tail == a.head {
                return Err(Error::Loop(labels[a.tail].clone()));
            }
            if !a.weight.is_positive() {
                return Err(Error::NonpositiveWeight {
                    tail: labels[a.tail].clone(),
                    head: labels[a.head].clone(),
                    weight: a.weight.to_string(),
                });
            }
            if !seen.insert((a.tail, a.head)) {
                return Err(Error::DuplicateArc(
                    labels[a.tail].clone(),
                    labels[a.head].clone(),
                ));
            }
        }
        Ok(WeightedDigraph { labels, arcs })
    }

    /// Builds a digraph from labels and `(tail, head, weight)` triples given by label.
    pub fn from_labeled(labels: &[&str], arcs: &[(&str, &str, Rational)]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let index = |name: &str| {
            labels
                .iter()
                .position(|l| l == name)
                .ok_or_else(|| Error::Precondition(format!("unknown vertex '{name}'")))
        };
        let arcs = arcs
            .iter()
            .map(|(t, h, w)| {
                Ok(Arc {
                    tail: index(t)?,
                    head: index(h)?,
                    weight: w.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels, arcs)
    }

    /// A digraph on `n` vertices named `v1..vn` with no arcs.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("v{i}")).collect(), Vec::new())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn weight(&self, tail: usize, head: usize) -> Option<&Rational> {
        self.arcs
            .iter()
            .find(|a| a.tail == tail && a.head == head)
            .map(|a| &a.weight)
    }

    pub fn indegree(&self, v: usize) -> usize {
        self.arcs.iter().filter(|a| a.head == v).count()
    }

    /// Copy of the digraph with `delta` added to the weight of arc `tail -> head`
    /// (the arc is created if absent).
    pub fn with_increased_weight(&self, tail: usize, head: usize, delta: &Rational) -> Result<Self> {
        let mut arcs = self.arcs.clone();
        match arcs.iter_mut().find(|a| a.tail == tail && a.head == head) {
            Some(a) => a.weight = a.weight.clone() + delta.clone(),
            None => arcs.push(Arc {
                tail,
                head,
                weight: delta.clone(),
            }),
        }
        Self::new(self.labels.clone(), arcs)
    }

    /// Reverses every arc, keeping weights.
    pub fn reverse(&self) -> Self {
        WeightedDigraph {
            labels: self.labels.clone(),
            arcs: self
                .arcs
                .iter()
                .map(|a| Arc {
                    tail: a.head,
                    head: a.tail,
                    weight: a.weight.clone(),
                })
                .collect(),
        }
    }

    /// Kirchhoff matrix: `l[i][j] = -w(j -> i)` off the diagonal and zero row sums.
    pub fn kirchhoff<T: Scalar>(&self) -> Matrix<T> {
        let mut l: Matrix<T> = Matrix::zeros(self.n());
        for a in &self.arcs {
            let w = T::from_rational(&a.weight);
            l[(a.head, a.tail)] = l[(a.head, a.tail)].clone() - w.clone();
            l[(a.head, a.head)] = l[(a.head, a.head)].clone() + w;
        }
        l
    }

    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n()];
        for a in &self.arcs {
            out[a.tail].push(a.head);
        }
        out
    }

    /// `r[i][j]` is true iff `j` is reachable from `i` (every vertex reaches itself).
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let succ = self.successors();
        (0..self.n()).map(|s| bfs(&succ, s, None)).collect()
    }

    /// Reachability from `from` in the digraph with vertex `removed` deleted.
    pub fn reachable_avoiding(&self, from: usize, removed: usize) -> Vec<bool> {
        bfs(&self.successors(), from, Some(removed))
    }

    /// Serializes back to the edge-list format.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let mut touched = vec![false; self.n()];
        for a in &self.arcs {
            touched[a.tail] = true;
            touched[a.head] = true;
        }
        // Declaring every vertex up front pins the vertex order on re-parse.
        for l in &self.labels {
            let _ = writeln!(out, "vertex {l}");
        }
        for a in &self.arcs {
            let _ = writeln!(
                out,
                "{} {} {}",
                self.labels[a.tail], self.labels[a.head], a.weight
            );
        }
        out
    }
}

fn bfs(succ: &[Vec<usize>], start: usize, removed: Option<usize>) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    if Some(start) == removed {
        return seen;
    }
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &w in &succ[u] {
            if !seen[w] && Some(w) != removed {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Parses the edge-list format: `tail head weight` lines, `vertex NAME`
/// declarations and `#` comments. Vertices are numbered by first appearance.
pub fn parse_digraph(text: &str) -> Result<WeightedDigraph> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut arcs = Vec::new();
    let mut intern = |name: &str, labels: &mut Vec<String>| -> usize {
        *index.entry(name.to_string()).or_insert_with(|| {
            labels.push(name.to_string());
            labels.len() - 1
        })
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_err = |msg: String| Error::Parse {
            line: lineno + 1,
            msg,
        };
        match fields.as_slice() {
            ["vertex", name] => {
                intern(name, &mut labels);
            }
            [tail, head, weight] => {
                let weight = parse_rational(weight).map_err(|e| match e {
                    Error::Parse { msg, .. } => parse_err(msg),
                    other => other,
                })?;
                let t = intern(tail, &mut labels);
                let h = intern(head, &mut labels);
                arcs.push(Arc {
                    tail: t,
                    head: h,
                    weight,
                });
            }
            _ => {
                return Err(parse_err(format!(
                    "expected 'tail head weight' or 'vertex NAME', got '{line}'"
                )))
            }
        }
    }
    WeightedDigraph::new(labels, arcs)
}

/// Undominated knots, forest dimensions and related structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub weak_components: Vec<Vec<usize>>,
    /// Source components of the condensation, each sorted.
    pub undominated_knots: Vec<Vec<usize>>,
    /// Union of all undominated knots.
    pub k_tilde: Vec<usize>,
    /// Per knot: vertices reachable from it and from no other knot.
    pub k_plus: Vec<Vec<usize>>,
    pub strong_components: Vec<Vec<usize>>,
    /// Out-forest dimension `v`: number of source strong components.
    pub out_dim: usize,
    /// In-forest dimension `v'`: number of sink strong components.
    pub in_dim: usize,
}

impl StructureReport {
    pub fn knot_of(&self, v: usize) -> Option<usize> {
        self.undominated_knots.iter().position(|k| k.contains(&v))
    }
}

pub fn analyze_structure(g: &WeightedDigraph) -> StructureReport {
    let n = g.n();
    let reach = g.reachability();

    let mut comp_of = vec![usize::MAX; n];
    let mut strong: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if comp_of[v] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (v..n).filter(|&w| reach[v][w] && reach[w][v]).collect();
        for &w in &members {
            comp_of[w] = strong.len();
        }
        strong.push(members);
    }

    let mut has_in = vec![false; strong.len()];
    let mut has_out = vec![false; strong.len()];
    for a in g.arcs() {
        let (ct, ch) = (comp_of[a.tail], comp_of[a.head]);
        if ct != ch {
            has_out[ct] = true;
            has_in[ch] = true;
        }
    }
    let knots: Vec<Vec<usize>> = strong
        .iter()
        .enumerate()
        .filter(|(c, _)| !has_in[*c])
        .map(|(_, m)| m.clone())
        .collect();
    let in_dim = has_out.iter().filter(|&&x| !x).count();

    let k_plus = knots
        .iter()
        .enumerate()
        .map(|(ki, knot)| {
            (0..n)
                .filter(|&w| {
                    reach[knot[0]][w]
                        && knots
                            .iter()
                            .enumerate()
                            .all(|(kj, other)| kj == ki || !reach[other[0]][w])
                })
                .collect()
        })
        .collect();

    let mut k_tilde: Vec<usize> = knots.iter().flatten().copied().collect();
    k_tilde.sort_unstable();

    StructureReport {
        weak_components: weak_components(g),
        out_dim: knots.len(),
        undominated_knots: knots,
        k_tilde,
        k_plus,
        strong_components: strong,
        in_dim,
    }
}

fn weak_components(g: &WeightedDigraph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for a in g.arcs() {
        adj[a.tail].push(a.head);
        adj[a.head].push(a.tail);
    }
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = bfs(&adj, s, None)
            .iter()
            .enumerate()
            .filter(|(_, &r)| r)
            .map(|(v, _)| v)
            .collect();
        for &v in &members {
            comp[v] = out.len();
        }
        out.push(members);
    }
    out
}

/// True iff `set` is an undominated knot of `g`: mutually reachable, no arc entering from outside.
pub fn is_undominated_knot(g: &WeightedDigraph, set: &[usize]) -> bool {
    if set.is_empty() {
        return false;
    }
    let reach = g.reachability();
    let inside = |v: usize| set.contains(&v);
    set.iter().all(|&a| set.iter().all(|&b| reach[a][b]))
        && !g.arcs().iter().any(|a| inside(a.head) && !inside(a.tail))
}

/// Unit-weight digraph on `n` vertices with out-forest dimension `k` and
/// in-forest dimension `k_in`: a star and a path sharing vertex `v1`, plus
/// isolated vertices.
pub fn dimension_fixture(n: usize, k: usize, k_in: usize) -> Result<WeightedDigraph> {
    if n < 2 {
        return Err(Error::TooFewVertices(n));
    }
    let range = format!("1..={}", n - 1);
    if k == 0 || k >= n {
        return Err(Error::out_of_range("k", k, range));
    }
    if k_in == 0 || k_in >= n {
        return Err(Error::out_of_range("k'", k_in, range));
    }
    let labels: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let one = Rational::from_integer(1.into());
    let arc = |tail: usize, head: usize| Arc {
        tail,
        head,
        weight: one.clone(),
    };
    let mut arcs = Vec::new();
    let mut next = 1;
    if k <= k_in {
        // diverging star with k'-k leaves, path of n-k' further vertices out of
        // the root, k-1 isolated vertices
        for _ in 0..k_in - k {
            arcs.push(arc(0, next));
            next += 1;
        }
        let mut prev = 0;
        for _ in 0..n - k_in {
            arcs.push(arc(prev, next));
            prev = next;
            next += 1;
        }
    } else {
        // converging star with k-k' leaves, path of n-k further vertices into
        // the centre, k'-1 isolated vertices
        for _ in 0..k - k_in {
            arcs.push(arc(next, 0));
            next += 1;
        }
        let path: Vec<usize> = (next..next + (n - k)).collect();
        next += n - k;
        for w in path.windows(2) {
            arcs.push(arc(w[0], w[1]));
        }
        arcs.push(arc(*path.last().expect("n - k >= 1"), 0));
    }
    debug_assert!(next <= n);
    WeightedDigraph::new(labels, arcs)
}

/// Convenience check used by callers that index into a `WeightedDigraph`.
pub(crate) fn check_vertex(g: &WeightedDigraph, v: usize) -> Result<()> {
    if v >= g.n() {
        return Err(Error::NoSuchVertex(v));
    }
    Ok(())
}
