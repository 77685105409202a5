//! Markov chains related to a digraph (`P = I - alpha L`) and the geometric
//! observation model: the chain is observed at the first success of a run of
//! Bernoulli(q) trials held at t = 0, 1, 2, ...

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::{check_vertex, WeightedDigraph};
use crate::error::{Error, Result};
use crate::forest::{forest_sequence, q_tau, ForestSequence};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct RelatedChain<T> {
    pub graph: WeightedDigraph,
    pub kirchhoff: Matrix<T>,
    /// Transition matrix `I - alpha L`.
    pub p: Matrix<T>,
    pub alpha: T,
    /// All entries of `p` lie in `[0, 1]`.
    pub stochastic: bool,
}

pub fn related_chain<T: Scalar>(g: &WeightedDigraph, alpha: &T) -> Result<RelatedChain<T>> {
    if alpha.is_zero() {
        return Err(Error::out_of_range("alpha", alpha, "alpha != 0"));
    }
    let l: Matrix<T> = g.kirchhoff();
    let p = &Matrix::identity(g.n()) - &l.scale(alpha);
    let (zero, one) = (T::zero(), T::one());
    let stochastic = p
        .entries()
        .iter()
        .all(|x| x.at_least(&zero) && one.at_least(x));
    Ok(RelatedChain {
        graph: g.clone(),
        kirchhoff: l,
        p,
        alpha: alpha.clone(),
        stochastic,
    })
}

#[derive(Clone, Debug)]
pub struct ObservationResult<T> {
    pub q: T,
    /// `(1/q - 1) alpha`.
    pub tau: T,
    /// `q (I - (1-q) P)^-1`.
    pub matrix: Matrix<T>,
}

fn check_q<T: Scalar>(q: &T) -> Result<()> {
    if !q.definitely_gt(&T::zero()) || !T::one().definitely_gt(q) {
        return Err(Error::out_of_range("q", q, "0 < q < 1"));
    }
    Ok(())
}

/// Closed-form observation matrix, checked against `Q(tau)` at `tau = (1/q - 1) alpha`.
pub fn observation_matrix<T: Scalar>(chain: &RelatedChain<T>, q: &T) -> Result<ObservationResult<T>> {
    check_q(q)?;
    let n = chain.p.order();
    let one = T::one();
    let tau = (one.clone() / q.clone() - one.clone()) * chain.alpha.clone();
    let resolvent = (&Matrix::identity(n) - &chain.p.scale(&(one - q.clone()))).inverse()?;
    let matrix = resolvent.scale(q);

    let forest_side = if tau.definitely_gt(&T::zero()) {
        let seq: ForestSequence<T> = forest_sequence(&chain.graph)?;
        q_tau(&seq, &tau)?
    } else {
        // negative alpha: the identity is purely algebraic
        (&Matrix::identity(n) + &chain.kirchhoff.scale(&tau)).inverse()?
    };
    if !matrix.approx_eq(&forest_side) {
        return Err(Error::Consistency(format!(
            "observation matrix differs from Q(tau) at tau = {tau} (max diff {})",
            matrix.max_abs_diff(&forest_side)
        )));
    }
    Ok(ObservationResult {
        q: q.clone(),
        tau,
        matrix,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalRow {
    pub start: usize,
    pub trials: u64,
    pub seed: u64,
    pub partitions: usize,
    pub counts: Vec<u64>,
    pub frequencies: Vec<f64>,
}

/// Monte-Carlo estimate of one row of the observation matrix.
///
/// Trials are split into `partitions` contiguous chunks; chunk `p` draws
/// from a ChaCha8 generator seeded with `seed` on stream `p`, so the result
/// depends only on `(seed, partitions, trials)`. Chunks run on separate threads.
pub fn simulate_observation<T: Scalar>(
    chain: &RelatedChain<T>,
    q: f64,
    start: usize,
    trials: u64,
    seed: u64,
    partitions: usize,
) -> Result<EmpiricalRow> {
    if !chain.stochastic {
        return Err(Error::Precondition(
            "simulation needs a stochastic chain (0 < alpha <= 1 / max l_ii)".to_string(),
        ));
    }
    check_q(&q)?;
    let n = chain.p.order();
    check_vertex(&chain.graph, start)?;
    if trials == 0 || partitions == 0 {
        return Err(Error::Precondition(
            "trials and partitions must be positive".to_string(),
        ));
    }

    let cumulative: Vec<Vec<f64>> = chain
        .p
        .rows()
        .take(n)
        .map(|row| {
            row.iter()
                .scan(0.0, |acc, x| {
                    *acc += x.to_f64();
                    Some(*acc)
                })
                .collect()
        })
        .collect();
    let log_fail = (1.0 - q).ln();

    let chunk = |p: usize| -> u64 {
        let base = trials / partitions as u64;
        base + u64::from((p as u64) < trials % partitions as u64)
    };

    let run = |p: usize| -> Vec<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(p as u64);
        let mut counts = vec![0u64; n];
        for _ in 0..chunk(p) {
            let u: f64 = rng.gen();
            // inverse CDF of the geometric law on {0, 1, 2, ...}
            let steps = ((1.0 - u).ln() / log_fail).floor() as u64;
            let mut state = start;
            for _ in 0..steps {
                state = step(&cumulative[state], rng.gen());
            }
            counts[state] += 1;
        }
        counts
    };

    let per_partition: Vec<Vec<u64>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..partitions).map(|p| s.spawn(move || run(p))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation thread panicked"))
            .collect()
    });
    let mut counts = vec![0u64; n];
    for part in per_partition {
        for (c, x) in counts.iter_mut().zip(part) {
            *c += x;
        }
    }
    let frequencies = counts.iter().map(|&c| c as f64 / trials as f64).collect();
    Ok(EmpiricalRow {
        start,
        trials,
        seed,
        partitions,
        counts,
        frequencies,
    })
}

fn step(cumulative: &[f64], r: f64) -> usize {
    cumulative
        .iter()
        .position(|&c| r < c)
        .unwrap_or_else(|| {
            // rounding left the last cumulative value just under 1
            cumulative
                .iter()
                .rposition(|&c| c > 0.0)
                .unwrap_or(cumulative.len() - 1)
        })
}

/// Cesàro average `(1/k) sum_{p<k} P^p`, computed exactly by binary doubling.
pub fn cesaro_limit<T: Scalar>(chain: &RelatedChain<T>, k: u64) -> Result<Matrix<T>> {
    if !chain.stochastic {
        return Err(Error::Precondition(
            "Cesàro averages need a stochastic chain".to_string(),
        ));
    }
    if k == 0 {
        return Err(Error::out_of_range("k", k, "k >= 1"));
    }
    let n = chain.p.order();
    // invariant: sum = P^0 + ... + P^(m-1), power = P^m
    let mut sum = Matrix::zeros(n);
    let mut power = Matrix::identity(n);
    for bit in (0..64 - k.leading_zeros()).rev() {
        sum = &sum + &(&power * &sum);
        power = &power * &power;
        if (k >> bit) & 1 == 1 {
            sum = &sum + &power;
            power = &power * &chain.p;
        }
    }
    Ok(sum.scale(&(T::one() / T::from_i64(k as i64))))
}

/// Max-entry distance from the observation matrix to `J̄` for each `q`.
pub fn observation_limit<T: Scalar>(chain: &RelatedChain<T>, qs: &[T]) -> Result<Vec<(T, f64)>> {
    let seq: ForestSequence<T> = forest_sequence(&chain.graph)?;
    let jbar = seq.jbar();
    qs.iter()
        .map(|q| {
            let obs = observation_matrix(chain, q)?;
            Ok((q.clone(), obs.matrix.max_abs_diff(&jbar)))
        })
        .collect()
}
