//! Range sweeps: one row of closed forms and oracle values per modulus.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BuildOptions, CleanGraph, DEFAULT_VERTEX_CAP};
use crate::matching::{matching_number_closed, maximum_matching, DEFAULT_BLOSSOM_CAP};
use crate::metrics::{diameter_closed, distance_summary, wiener_closed, Distance, WienerIndex};
use crate::ring::{count_self_inverse_closed, euler_phi, factorize, RingData};

pub const CSV_HEADER: &str =
    "n,phi,k,m,r,vertices,wiener_closed,wiener_oracle,matching_closed,matching_oracle,diameter,agree";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    pub vertex_cap: usize,
    pub blossom_cap: usize,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            vertex_cap: DEFAULT_VERTEX_CAP,
            blossom_cap: DEFAULT_BLOSSOM_CAP,
            jobs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: u64,
    pub phi: u64,
    pub k: usize,
    pub m: u32,
    pub r: u64,
    pub vertices: u64,
    pub wiener_closed: WienerIndex,
    pub wiener_oracle: Option<WienerIndex>,
    pub matching_closed: Option<u64>,
    pub matching_oracle: Option<u64>,
    /// BFS diameter when the graph was built, the closed form otherwise.
    pub diameter: Distance,
    /// `None` when no oracle ran.
    pub agree: Option<bool>,
}

pub fn scan_one(n: u64, opts: &ScanOptions) -> Result<ScanRow> {
    let fact = factorize(n)?;
    let k = fact.k_total();
    let phi = euler_phi(&fact);
    let vertices = ((1u64 << k) - 1) * phi;
    let wiener_c = wiener_closed(&fact)?;
    let diameter_c = diameter_closed(&fact)?;
    let matching_c = (k >= 2)
        .then(|| matching_number_closed(&fact))
        .transpose()?;
    let mut row = ScanRow {
        n,
        phi,
        k,
        m: fact.two_adic(),
        r: count_self_inverse_closed(&fact)?,
        vertices,
        wiener_closed: wiener_c,
        wiener_oracle: None,
        matching_closed: matching_c,
        matching_oracle: None,
        diameter: diameter_c,
        agree: None,
    };
    if vertices <= opts.vertex_cap as u64 {
        let build = BuildOptions {
            include_zero_block: false,
            vertex_cap: opts.vertex_cap,
        };
        let g = CleanGraph::from_ring(RingData::from_factorization(fact)?, build)?;
        let summary = distance_summary(&g);
        row.wiener_oracle = Some(summary.wiener);
        row.diameter = summary.diameter;
        let mut agree = summary.wiener == wiener_c && summary.diameter == diameter_c;
        if g.vertex_count() <= opts.blossom_cap {
            let size = maximum_matching(&g, opts.blossom_cap)?.size() as u64;
            row.matching_oracle = Some(size);
            if let Some(closed) = matching_c {
                agree &= closed == size;
            }
        }
        row.agree = Some(agree);
    }
    Ok(row)
}

/// Rows for every `n` in `[n_min, n_max]`, in ascending order regardless of
/// how the work was scheduled.
pub fn scan(n_min: u64, n_max: u64, opts: &ScanOptions) -> Result<Vec<ScanRow>> {
    if n_min < 2 {
        return Err(Error::ModulusTooSmall { n: n_min, min: 2 });
    }
    if n_min > n_max {
        return Err(Error::EmptyRange {
            min: n_min,
            max: n_max,
        });
    }
    let work = || {
        (n_min..=n_max)
            .into_par_iter()
            .map(|n| scan_one(n, opts))
            .collect::<Result<Vec<_>>>()
    };
    match opts.jobs {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Io(std::io::Error::other(e)))?
            .install(work),
        None => work(),
    }
}

fn cell<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(String::new, T::to_string)
}

pub fn write_scan_csv<W: Write>(rows: &[ScanRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.phi,
            r.k,
            r.m,
            r.r,
            r.vertices,
            r.wiener_closed,
            cell(&r.wiener_oracle),
            cell(&r.matching_closed),
            cell(&r.matching_oracle),
            r.diameter,
            cell(&r.agree),
        )?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv(rows: &[ScanRow]) -> String {
        let mut buf = Vec::new();
        write_scan_csv(rows, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn small_range_rows() {
        let rows = scan(6, 9, &ScanOptions::default()).unwrap();
        let text = csv(&rows);
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "6,2,2,1,2,6,23,23,3,3,3,true");
        assert_eq!(lines[2], "7,6,1,0,2,6,INF,INF,,2,INF,true");
        assert_eq!(lines[4], "9,6,1,0,2,6,INF,INF,,2,INF,true");
    }

    #[test]
    fn figure_series_for_twice_prime_powers() {
        let rows = scan(6, 26, &ScanOptions::default()).unwrap();
        let series: Vec<_> = rows
            .iter()
            .filter(|r| r.m == 1 && r.k == 2)
            .map(|r| (r.n, r.phi, r.wiener_oracle.unwrap().finite().unwrap()))
            .collect();
        assert_eq!(
            series,
            vec![
                (6, 2, 23),
                (10, 4, 110),
                (14, 6, 265),
                (18, 6, 265),
                (22, 10, 779),
                (26, 12, 1138)
            ]
        );
    }

    #[test]
    fn oracle_columns_empty_above_cap() {
        let opts = ScanOptions {
            vertex_cap: 10,
            blossom_cap: 10,
            jobs: Some(1),
        };
        let rows = scan(15, 15, &opts).unwrap();
        assert_eq!(
            csv(&rows).lines().nth(1).unwrap(),
            "15,8,2,0,4,24,492,,12,,3,"
        );
    }

    #[test]
    fn pool_size_does_not_change_output() {
        let one = scan(
            2,
            80,
            &ScanOptions {
                jobs: Some(1),
                ..Default::default()
            },
        )
        .unwrap();
        let four = scan(
            2,
            80,
            &ScanOptions {
                jobs: Some(4),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(csv(&one), csv(&four));
    }

    #[test]
    fn range_errors() {
        assert!(matches!(
            scan(1, 5, &ScanOptions::default()),
            Err(Error::ModulusTooSmall { .. })
        ));
        assert!(matches!(
            scan(9, 5, &ScanOptions::default()),
            Err(Error::EmptyRange { .. })
        ));
    }
}
