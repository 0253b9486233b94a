use rayon::prelude::*;

use super::{PropertyKind, PropertyVerdict, Verdict};
use crate::error::{Error, Result};
use crate::graph::{Subgraph, Topology, VertexId};
use crate::hash::{derive_seed, Stream};
use crate::stats::{linear_fit, mean_and_std_err, LinearFit};
use crate::walks::Walker;

/// Mean visit counts per horizon and their regression on `ln h`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceEstimate {
    pub horizons: Vec<usize>,
    pub mean_visits: Vec<f64>,
    pub std_err: Vec<f64>,
    pub fit: LinearFit,
    /// 95% confidence interval of the slope.
    pub slope_ci: (f64, f64),
}

/// Visits of `a` at times `1..=h` for walks from `start`; a walk that reaches
/// the window boundary stops counting. Each horizon uses its own batch of
/// `n_walks` walks so the regression points are independent. The verdict
/// holds when the slope of mean visits against `ln h` is positive with its
/// 95% interval excluding zero. Evidence: slope, interval, then the means.
pub fn recurrent_subset_estimate<T: Topology + ?Sized>(
    g: &T,
    a: &Subgraph,
    start: VertexId,
    n_walks: usize,
    horizons: &[usize],
    seed: u64,
) -> Result<(PropertyVerdict, RecurrenceEstimate)> {
    if a.is_empty() {
        return Err(Error::EmptyTarget);
    }
    if n_walks < 2
        || horizons.len() < 3
        || horizons[0] == 0
        || horizons.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::InvalidParameter(
            "need at least 2 walks and 3 positive, strictly increasing horizons".into(),
        ));
    }
    g.check_vertex(start)?;
    if g.degree(start) == 0 {
        return Err(Error::IsolatedVertex(start));
    }
    let mut mean_visits = Vec::with_capacity(horizons.len());
    let mut std_err = Vec::with_capacity(horizons.len());
    for (j, &h) in horizons.iter().enumerate() {
        let counts: Vec<f64> = (0..n_walks)
            .into_par_iter()
            .map(|i| {
                let s = derive_seed(seed, Stream::Walk, ((j as u64) << 32) | i as u64);
                let mut w = Walker::new(g, start, s).expect("start checked");
                let mut visits = 0u64;
                for _ in 0..h {
                    let (v, _) = w.step();
                    visits += u64::from(a.contains_vertex(v));
                    if g.is_boundary(v) {
                        break;
                    }
                }
                visits as f64
            })
            .collect();
        let (m, se) = mean_and_std_err(&counts);
        mean_visits.push(m);
        std_err.push(se);
    }
    let x: Vec<f64> = horizons.iter().map(|&h| (h as f64).ln()).collect();
    let fit = linear_fit(&x, &mean_visits).expect("distinct horizons");
    let slope_ci = fit.slope_ci(0.95);
    let verdict = if fit.slope > 0.0 && slope_ci.0 > 0.0 {
        Verdict::HoldsAtScale
    } else {
        Verdict::FailsAtScale
    };
    let mut evidence = vec![fit.slope, slope_ci.0, slope_ci.1];
    evidence.extend(&mean_visits);
    let pv = PropertyVerdict::new(PropertyKind::RecurrentSubset, verdict, g.window_radius())
        .with_evidence(evidence);
    Ok((
        pv,
        RecurrenceEstimate {
            horizons: horizons.to_vec(),
            mean_visits,
            std_err,
            fit,
            slope_ci,
        },
    ))
}
