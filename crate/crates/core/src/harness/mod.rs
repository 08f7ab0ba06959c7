//! Batch experiments over generated instance families.

pub mod report;

use std::ops::RangeInclusive;
use std::time::Instant;

use rayon::prelude::*;

use crate::certificate::verify_certificate;
use crate::ec2::{fdt_2ec, verify_2ec_certificate};
use crate::error::{FdtError, Result};
use crate::fdt::{fdt_dive, fdt_tree};
use crate::gen::{enumerate_cv, gen_tap, gen_vc, CvInstance};
use crate::graph::Graph;
use crate::lp::{self, LpStatus};
use crate::model::{support, IpInstance};
use crate::scalar::{Mode, Rational, Scalar};

pub use report::{ExperimentReport, Histogram, Record};

/// Optimal vertex of the relaxation and its value.
pub fn lp_optimum<S: Scalar>(inst: &IpInstance) -> Result<(Vec<S>, S)> {
    let out = lp::solve(&inst.relaxation::<S>())?;
    if out.status != LpStatus::Optimal {
        return Err(FdtError::Validation(format!("relaxation of {} is {:?}", inst.name, out.status)));
    }
    Ok((out.solution, out.objective))
}

fn ratio(cost: f64, lp: f64) -> Option<f64> {
    if lp.abs() <= 1e-12 {
        (cost.abs() <= 1e-12).then_some(1.0)
    } else {
        Some(cost / lp)
    }
}

fn timed(id: String, f: impl FnOnce() -> Result<Record>) -> Record {
    let start = Instant::now();
    let out = f();
    let ms = start.elapsed().as_secs_f64() * 1e3;
    match out {
        Ok(mut r) => {
            r.id = id;
            r.wall_ms = ms;
            r
        }
        Err(e) => Record::failed(id, &e, ms),
    }
}

/// Tree on the LP optimum; the cheapest leaf gives the cost.
fn tree_record<S: Scalar>(inst: &IpInstance) -> Result<Record> {
    let (x, lp) = lp_optimum::<S>(inst)?;
    let cert = fdt_tree(inst, &x)?;
    let report = verify_certificate(&cert, inst)?;
    if let Some(f) = report.failure {
        return Err(FdtError::Invariant(format!("certificate rejected: {f}")));
    }
    let (_, best) = cert
        .cheapest_by(|z| inst.integer_cost(z))
        .ok_or_else(|| FdtError::Invariant("certificate has no solutions".into()))?;
    let (lp, best) = (lp.to_f64(), best.to_f64());
    Ok(Record {
        lp_value: Some(lp),
        best_cost: Some(best),
        factor: Some(cert.factor.to_f64()),
        ratio: ratio(best, lp),
        solutions: Some(cert.len()),
        ..Record::default()
    })
}

fn pick_mode(mode: Option<Mode>, n: usize) -> Mode {
    mode.unwrap_or_else(|| Mode::auto(n))
}

/// `per_size` random instances for each tree size; instance `i` overall uses seed `seed + i`.
pub fn run_tap_experiment(
    levels: RangeInclusive<u32>,
    per_size: usize,
    seed: u64,
    mode: Option<Mode>,
) -> ExperimentReport {
    let jobs: Vec<(u32, u64)> = levels
        .clone()
        .flat_map(|l| (0..per_size).map(move |i| (l, i as u64)))
        .enumerate()
        .map(|(k, (l, _))| (l, seed.wrapping_add(k as u64)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(l, s)| {
            timed(format!("tap-L{l}-s{s}"), || {
                let (_, ip) = gen_tap(l, s)?;
                match pick_mode(mode, ip.num_vars) {
                    Mode::Float => tree_record::<f64>(&ip),
                    Mode::Rational => tree_record::<Rational>(&ip),
                }
            })
        })
        .collect();
    ExperimentReport::new("tap", records, Histogram::ratio_bins())
}

#[derive(Debug, Clone)]
pub struct VcOptions {
    pub dive_seeds: u64,
    pub seed: u64,
    /// Largest LP support for which the full tree is built.
    pub tree_limit: usize,
    pub mode: Option<Mode>,
}

impl Default for VcOptions {
    fn default() -> Self {
        VcOptions {
            dive_seeds: 10,
            seed: 0,
            tree_limit: 60,
            mode: None,
        }
    }
}

fn vc_record<S: Scalar>(inst: &IpInstance, opts: &VcOptions) -> Result<Record> {
    let (x, lp) = lp_optimum::<S>(inst)?;
    let mut dive_best: Option<f64> = None;
    for s in 0..opts.dive_seeds {
        let run = fdt_dive(inst, &x, opts.seed.wrapping_add(s))?;
        let c = inst.integer_cost(&run.solution).to_f64();
        dive_best = Some(dive_best.map_or(c, |b: f64| b.min(c)));
    }
    let mut rec = if support(&x).len() <= opts.tree_limit {
        tree_record::<S>(inst)?
    } else {
        Record {
            lp_value: Some(lp.to_f64()),
            ..Record::default()
        }
    };
    rec.dive_cost = dive_best;
    let best = match (rec.best_cost, dive_best) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    rec.best_cost = best;
    rec.ratio = best.and_then(|b| ratio(b, lp.to_f64()));
    Ok(rec)
}

/// Dives from the LP optimum under several seeds, plus the full tree when the support is small.
pub fn run_vc_experiment(graphs: &[(String, Graph)], opts: &VcOptions) -> ExperimentReport {
    let records = graphs
        .par_iter()
        .map(|(id, g)| {
            timed(id.clone(), || {
                let inst = gen_vc(g, None)?;
                match pick_mode(opts.mode, inst.num_vars) {
                    Mode::Float => vc_record::<f64>(&inst, opts),
                    Mode::Rational => vc_record::<Rational>(&inst, opts),
                }
            })
        })
        .collect();
    ExperimentReport::new("vc", records, Histogram::ratio_bins())
}

fn cv_record<S: Scalar>(inst: &CvInstance) -> Result<Record> {
    let point = inst.point.convert::<S>();
    let cert = fdt_2ec(&point)?;
    let report = verify_2ec_certificate(&cert, &point.graph)?;
    if let Some(f) = report.failure {
        return Err(FdtError::Invariant(format!("certificate rejected: {f}")));
    }
    Ok(Record {
        factor: Some(cert.factor.to_f64()),
        solutions: Some(cert.len()),
        ..Record::default()
    })
}

/// Every enumerated point for each cycle length; float arithmetic unless `mode` says otherwise.
pub fn run_cv_experiment(cycle_lengths: &[usize], seed: u64, mode: Option<Mode>) -> Result<ExperimentReport> {
    let mut points = Vec::new();
    for &k in cycle_lengths {
        let e = enumerate_cv(k, seed)?;
        log::info!(
            "k = {k}: {} matching classes, {} points, {} labeled matchings",
            e.classes,
            e.instances.len(),
            e.labeled
        );
        points.extend(e.instances.into_iter().enumerate().map(|(i, p)| (format!("cv{k}-{i:03}"), p)));
    }
    let records = points
        .par_iter()
        .map(|(id, p)| {
            timed(id.clone(), || match mode.unwrap_or(Mode::Float) {
                Mode::Float => cv_record::<f64>(p),
                Mode::Rational => cv_record::<Rational>(p),
            })
        })
        .collect();
    Ok(ExperimentReport::new("cv", records, Histogram::factor_bins()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::TapInstance;

    #[test]
    fn triangle_and_star() {
        let star = Graph::new(6, (1..6).map(|v| (0, v)).collect()).unwrap();
        let graphs = vec![("k3".to_string(), Graph::cycle(3)), ("star".to_string(), star)];
        let rep = run_vc_experiment(&graphs, &VcOptions::default());
        assert_eq!(rep.errors(), 0);
        let k3 = &rep.records[0];
        assert_eq!(k3.lp_value, Some(1.5));
        assert_eq!(k3.best_cost, Some(2.0));
        assert!((k3.ratio.unwrap() - 4.0 / 3.0).abs() < 1e-12);
        let star = &rep.records[1];
        assert_eq!(star.lp_value, Some(1.0));
        assert_eq!(star.ratio, Some(1.0));
    }

    #[test]
    fn one_link_per_edge_has_ratio_one() {
        let tree = Graph::new(5, vec![(0, 1), (0, 2), (1, 3), (1, 4)]).unwrap();
        let tap = TapInstance::new(tree.clone(), tree.edges.clone(), vec![Rational::from_i64(2); 4]).unwrap();
        let rec = tree_record::<Rational>(&tap.cut_lp().unwrap()).unwrap();
        assert_eq!(rec.ratio, Some(1.0));
        assert_eq!(rec.factor, Some(1.0));
    }

    #[test]
    fn small_tap_batch_is_reproducible() {
        let a = run_tap_experiment(3..=3, 5, 11, None);
        let b = run_tap_experiment(3..=3, 5, 11, None);
        assert_eq!(a.errors(), 0);
        assert_eq!(a.to_csv(false).unwrap(), b.to_csv(false).unwrap());
        assert!(a.max_ratio().unwrap() <= 1.5 + 1e-9);
        assert!(a.records.iter().all(|r| r.ratio.unwrap() >= 1.0 - 1e-9));
        assert_eq!(a.histogram.total(), 5);
    }

    #[test]
    fn failures_become_rows() {
        let loops = vec![("loop".to_string(), Graph::new(2, vec![(0, 0)]).unwrap())];
        let rep = run_vc_experiment(&loops, &VcOptions::default());
        assert_eq!(rep.errors(), 1);
        assert!(rep.records[0].error.as_ref().unwrap().contains("self-loop"));
        assert_eq!(rep.histogram.total(), 0);
    }
}
