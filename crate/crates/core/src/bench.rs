//! Throughput and scaling harness around the streaming sampler.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use crate::automaton::{Params, Transition};
use crate::format::{FileSink, Header};
use crate::shuffle::{DefaultRng, RngSource};
use crate::stream::{sample_stream, NullSink, StreamError};

/// Where benchmark runs send their transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BenchSink {
    Null,
    /// Collect into a vector (memory grows with `m`).
    Memory,
    /// Write an edge-list file, overwritten on every run.
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchPoint {
    pub params: Params,
    pub seed: u64,
    pub runs: u64,
    pub edges: u64,
    pub attempts: u64,
    pub max_attempts: u64,
    pub seconds: f64,
}

impl BenchPoint {
    pub fn edges_per_sec(&self) -> f64 {
        self.edges as f64 / self.seconds
    }

    pub fn mean_attempts(&self) -> f64 {
        self.attempts as f64 / self.runs as f64
    }

    pub fn seconds_per_run(&self) -> f64 {
        self.seconds / self.runs as f64
    }
}

/// Generates at least `min_runs` automata and keeps going until
/// `min_seconds` of wall time have elapsed, so tiny instances still get
/// a stable timing.
pub fn run_point(
    p: Params,
    seed: u64,
    sink: &BenchSink,
    min_runs: u64,
    min_seconds: f64,
) -> Result<BenchPoint, StreamError> {
    let mut source = RngSource::<f64, DefaultRng>::seeded(seed);
    let mut point = BenchPoint { params: p, seed, runs: 0, edges: 0, attempts: 0, max_attempts: 0, seconds: 0.0 };
    let start = Instant::now();
    while point.runs < min_runs.max(1) || start.elapsed().as_secs_f64() < min_seconds {
        let stats = match sink {
            BenchSink::Null => sample_stream(p, &mut source, &mut NullSink::default(), None)?,
            BenchSink::Memory => {
                let mut edges: Vec<Transition> = Vec::new();
                let stats = sample_stream(p, &mut source, &mut edges, None)?;
                std::hint::black_box(&edges);
                stats
            }
            BenchSink::File(path) => {
                let header = Header { n: p.n, m: p.m, sigma: p.sigma, seed: Some(seed) };
                let mut file = FileSink::create(path, &header)?;
                sample_stream(p, &mut source, &mut file, None)?
            }
        };
        point.runs += 1;
        point.edges += stats.edges_emitted;
        point.attempts += stats.attempts;
        point.max_attempts = point.max_attempts.max(stats.attempts);
    }
    point.seconds = start.elapsed().as_secs_f64();
    Ok(point)
}

/// The scaling grid: `n = base_n * 2^i` for `i < n_steps` and
/// `m = n * 2^j - 1` for `j < m_steps`, at fixed `sigma`. Points outside
/// the family constraints are skipped.
pub fn grid(base_n: u64, n_steps: u32, m_steps: u32, sigma: u64) -> Vec<Params> {
    (0..n_steps)
        .map(|i| base_n << i)
        .flat_map(|n| (0..m_steps).map(move |j| Params::new(n, (n << j) - 1, sigma)))
        .filter(|p| p.validate().is_ok())
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub const CSV_HEADER: &str = "n,m,sigma,runs,seconds_per_run,edges_per_sec,mean_attempts";

pub fn csv_row(p: &BenchPoint) -> String {
    format!(
        "{},{},{},{},{:.6e},{:.0},{:.4}",
        p.params.n,
        p.params.m,
        p.params.sigma,
        p.runs,
        p.seconds_per_run(),
        p.edges_per_sec(),
        p.mean_attempts()
    )
}

/// Peak resident set size of this process in KiB (`VmHWM`), where the
/// platform exposes it.
pub fn peak_rss_kib() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|v| v.trim().trim_end_matches("kB").trim().parse().ok())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = grid(1 << 15, 7, 8, 128);
        assert_eq!(g.len(), 56);
        assert_eq!(g[0], Params::new(32768, 32767, 128));
        assert_eq!(g[7], Params::new(32768, 32768 * 128 - 1, 128));
        assert_eq!(g[55].n, 1 << 21);
        assert!(grid(4, 1, 3, 3).iter().all(|p| p.validate().is_ok()));
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<_> = (1..10).map(|i| (i as f64, 3.0 * (i as f64).powf(1.5))).collect();
        assert!((loglog_slope(&pts).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(loglog_slope(&[(1.0, 1.0)]), None);
        assert_eq!(loglog_slope(&[(2.0, 1.0), (2.0, 5.0)]), None);
    }

    #[test]
    fn point_counts_runs() {
        let p = Params::new(10, 30, 3);
        let pt = run_point(p, 1, &BenchSink::Null, 5, 0.0).unwrap();
        assert_eq!(pt.runs, 5);
        assert_eq!(pt.edges, 150);
        assert!(pt.attempts >= 5);
        let mem = run_point(p, 1, &BenchSink::Memory, 2, 0.0).unwrap();
        assert_eq!(mem.edges, 60);
    }

    #[test]
    fn file_sink_point() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.wdfa");
        run_point(Params::new(5, 6, 2), 3, &BenchSink::File(path.clone()), 2, 0.0).unwrap();
        assert_eq!(fs::read_to_string(path).unwrap().lines().count(), 7);
    }

    #[test]
    fn rss_readable_on_linux() {
        if cfg!(target_os = "linux") {
            assert!(peak_rss_kib().unwrap() > 0);
        }
    }
}
