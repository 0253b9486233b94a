//! Exact `P_p(U(H) has property P)` on small graphs by enumerating every
//! configuration of the edges outside `H`.
//!
//! Edges of `H` never change `U(H)` (both endpoints are already in it), so
//! only the remaining edges are enumerated. Verdicts come from
//! [`Property::evaluate`], the same code the Monte Carlo path uses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Subgraph, Topology};
use crate::percolation::{enlarge, Configuration};
use crate::properties::{Property, PropertyKind};

/// Largest number of enumerated edges.
pub const MAX_FREE_EDGES: usize = 24;
const CHUNK: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactResult {
    pub property: PropertyKind,
    pub p: BigRational,
    pub probability: BigRational,
    /// `2^m` for the `m` enumerated edges.
    pub n_configs: u64,
    /// `counts[k]`: satisfying configurations with exactly `k` open edges.
    pub counts: Vec<u64>,
}

impl ExactResult {
    pub fn probability_f64(&self) -> f64 {
        ratio_to_f64(&self.probability)
    }

    pub fn free_edges(&self) -> usize {
        self.counts.len() - 1
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn free_edges<T: Topology + ?Sized>(g: &T, h: &Subgraph) -> Result<Vec<EdgeId>> {
    let free: Vec<EdgeId> = (0..g.edge_count())
        .filter(|&e| !h.contains_edge(e))
        .collect();
    if free.len() > MAX_FREE_EDGES {
        return Err(Error::ResourceLimit(format!(
            "{} free edges; enumeration is limited to {MAX_FREE_EDGES}",
            free.len()
        )));
    }
    Ok(free)
}

/// `N_k` for `k = 0..=m`, where `m` is the number of edges outside `h`.
pub fn satisfying_counts<T: Topology + ?Sized>(
    g: &T,
    h: &Subgraph,
    property: &Property,
) -> Result<Vec<u64>> {
    let free = free_edges(g, h)?;
    let m = free.len();
    let total = 1u64 << m;
    let chunks: Vec<Vec<u64>> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut counts = vec![0u64; m + 1];
            let mut open = Vec::with_capacity(m);
            for mask in c * CHUNK..((c + 1) * CHUNK).min(total) {
                open.clear();
                open.extend((0..m).filter(|&i| mask >> i & 1 == 1).map(|i| free[i]));
                let cfg = Configuration::from_open_edges(g, &open, 0.5)?;
                if property.evaluate(g, &enlarge(g, h, &cfg))?.holds() {
                    counts[open.len()] += 1;
                }
            }
            Ok(counts)
        })
        .collect::<Result<_>>()?;
    let mut counts = vec![0u64; m + 1];
    for chunk in chunks {
        for (k, n) in chunk.into_iter().enumerate() {
            counts[k] += n;
        }
    }
    Ok(counts)
}

/// `sum_k N_k p^k (1 - p)^(m - k)`.
pub fn probability_from_counts(counts: &[u64], p: &BigRational) -> BigRational {
    let m = counts.len() - 1;
    let q = BigRational::one() - p;
    counts
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(k, &n)| BigRational::from_integer(BigInt::from(n)) * pow(p, k) * pow(&q, m - k))
        .fold(BigRational::zero(), |a, b| a + b)
}

fn pow(x: &BigRational, k: usize) -> BigRational {
    num_traits::pow(x.clone(), k)
}

fn check_p(p: &BigRational) -> Result<()> {
    if *p < BigRational::zero() || *p > BigRational::one() {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    Ok(())
}

pub fn exact_event_prob<T: Topology + ?Sized>(
    g: &T,
    h: &Subgraph,
    property: &Property,
    p: &BigRational,
) -> Result<ExactResult> {
    check_p(p)?;
    let counts = satisfying_counts(g, h, property)?;
    Ok(ExactResult {
        property: property.kind(),
        p: p.clone(),
        probability: probability_from_counts(&counts, p),
        n_configs: 1u64 << (counts.len() - 1),
        counts,
    })
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// Coefficients of `sum_k N_k p^k (1 - p)^(m - k)` in powers of `p`,
/// constant term first.
pub fn polynomial_from_counts(counts: &[u64]) -> Vec<BigInt> {
    let m = counts.len() - 1;
    let mut coeffs = vec![BigInt::zero(); m + 1];
    for (k, &n) in counts.iter().enumerate() {
        if n == 0 {
            continue;
        }
        // p^k (1 - p)^(m - k) = sum_i C(m - k, i) (-1)^i p^(k + i)
        for i in 0..=m - k {
            let term = BigInt::from(n) * binomial(m - k, i);
            if i % 2 == 0 {
                coeffs[k + i] += term;
            } else {
                coeffs[k + i] -= term;
            }
        }
    }
    coeffs
}

pub fn exact_polynomial<T: Topology + ?Sized>(
    g: &T,
    h: &Subgraph,
    property: &Property,
) -> Result<Vec<BigInt>> {
    Ok(polynomial_from_counts(&satisfying_counts(g, h, property)?))
}

/// Horner evaluation.
pub fn eval_polynomial(coeffs: &[BigInt], p: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
        acc * p + BigRational::from_integer(c.clone())
    })
}
