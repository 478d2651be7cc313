//! Regeneration of the published coefficient table, the `phi(n)` versus
//! Wiener index table and the two-/three-prime formulas, diffed against
//! their printed values and checked against the BFS oracle.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{build_cl2, BuildOptions};
use crate::metrics::{
    coefficient_table, corrected_coefficient_table, wiener_bruteforce, wiener_closed,
    wiener_closed_corrected, Coefficients, ParityCase, WienerIndex,
};
use crate::ring::{euler_phi, factorize};

/// Largest witness graph the oracle is run on by default.
pub const DEFAULT_WITNESS_CAP: usize = 1_000;

const ODD_PRIMES: [u64; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

/// Printed coefficient rows: shape, `k`, printed `r`, printed `(a, b, c)`.
const PRINTED_TABLE1: [(&str, u32, ParityCase, u64, Coefficients); 10] = [
    (
        "2p1^a1",
        2,
        ParityCase::TwiceOdd,
        2,
        Coefficients { a: 17, b: 15, c: 8 },
    ),
    (
        "2p1^a1 p2^a2",
        3,
        ParityCase::TwiceOdd,
        4,
        Coefficients {
            a: 29,
            b: 59,
            c: 32,
        },
    ),
    (
        "2p1^a1 p2^a2 p3^a3",
        4,
        ParityCase::TwiceOdd,
        8,
        Coefficients {
            a: 181,
            b: 243,
            c: 128,
        },
    ),
    (
        "2p1^a1 ... p4^a4",
        5,
        ParityCase::TwiceOdd,
        16,
        Coefficients {
            a: 869,
            b: 995,
            c: 512,
        },
    ),
    (
        "2p1^a1 ... p5^a5",
        6,
        ParityCase::TwiceOdd,
        32,
        Coefficients {
            a: 3781,
            b: 4035,
            c: 2048,
        },
    ),
    (
        "p1^a1 p2^a2",
        2,
        ParityCase::Odd,
        4,
        Coefficients { a: 1, b: 15, c: 16 },
    ),
    (
        "p1^a1 p2^a2 p3^a3",
        3,
        ParityCase::Odd,
        8,
        Coefficients {
            a: 29,
            b: 59,
            c: 64,
        },
    ),
    (
        "p1^a1 ... p4^a4",
        4,
        ParityCase::Odd,
        16,
        Coefficients {
            a: 181,
            b: 243,
            c: 256,
        },
    ),
    (
        "p1^a1 ... p5^a5",
        5,
        ParityCase::Odd,
        32,
        Coefficients {
            a: 869,
            b: 995,
            c: 1024,
        },
    ),
    (
        "p1^a1 ... p6^a6",
        6,
        ParityCase::Odd,
        64,
        Coefficients {
            a: 3781,
            b: 4035,
            c: 4096,
        },
    ),
];

/// Printed columns: the moduli grouped under one `phi`, and the printed W.
const PRINTED_TABLE2: [(&[u64], u64, u128); 6] = [
    (&[6], 2, 23),
    (&[10, 12], 4, 110),
    (&[14, 18], 6, 265),
    (&[20, 24], 8, 488),
    (&[22], 10, 779),
    (&[26, 36], 12, 1138),
];

/// Printed two- and three-prime formulas.
const PRINTED_COROLLARY: [(&str, u32, ParityCase, Coefficients); 4] = [
    (
        "W(Cl2(Z_pq)), p, q odd",
        2,
        ParityCase::Odd,
        Coefficients {
            a: 17,
            b: 15,
            c: 16,
        },
    ),
    (
        "W(Cl2(Z_pq)), one prime is 2",
        2,
        ParityCase::TwiceOdd,
        Coefficients { a: 17, b: 15, c: 8 },
    ),
    (
        "W(Cl2(Z_pqr)), all odd",
        3,
        ParityCase::Odd,
        Coefficients {
            a: 93,
            b: 59,
            c: 64,
        },
    ),
    (
        "W(Cl2(Z_pqr)), one prime is 2",
        3,
        ParityCase::TwiceOdd,
        Coefficients {
            a: 93,
            b: 59,
            c: 32,
        },
    ),
];

/// A printed value that differs from the recomputed one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrataEntry {
    pub location: String,
    pub printed: String,
    pub computed: String,
    /// BFS value at a witness modulus, when one was in reach.
    pub oracle: Option<String>,
}

/// The smallest modulus of a given shape and what each route says about it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub n: u64,
    pub phi: u64,
    pub printed_value: i128,
    pub computed_value: i128,
    pub oracle: Option<WienerIndex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub location: String,
    pub k: u32,
    pub parity: ParityCase,
    pub printed_r: Option<u64>,
    pub computed_r: u64,
    pub printed: Coefficients,
    pub computed: Coefficients,
    pub corrected: Coefficients,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiTableRow {
    pub n: u64,
    pub printed_phi: u64,
    pub phi: u64,
    pub printed_wiener: u128,
    pub computed: WienerIndex,
    pub oracle: Option<WienerIndex>,
}

/// A witness modulus where the published closed form and the oracle differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleDisagreement {
    pub location: String,
    pub n: u64,
    pub closed: WienerIndex,
    pub corrected: WienerIndex,
    pub oracle: WienerIndex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TablesReport {
    pub coefficient_rows: Vec<CoefficientRow>,
    pub phi_rows: Vec<PhiTableRow>,
    pub corollary_rows: Vec<CoefficientRow>,
    pub errata: Vec<ErrataEntry>,
    pub oracle_disagreements: Vec<OracleDisagreement>,
}

/// Smallest squarefree modulus with `k` distinct primes in the given case.
fn smallest_modulus(k: u32, parity: ParityCase) -> u64 {
    let (lead, odd) = match parity {
        ParityCase::Odd => (1, k),
        ParityCase::TwiceOdd => (2, k - 1),
        ParityCase::FourTimesOdd => (4, k - 1),
        ParityCase::EightDivides => (8, k - 1),
    };
    lead * ODD_PRIMES[..odd as usize].iter().product::<u64>()
}

struct OracleCache {
    cap: usize,
    values: BTreeMap<u64, Option<WienerIndex>>,
}

impl OracleCache {
    fn wiener(&mut self, n: u64) -> Result<Option<WienerIndex>> {
        if let Some(v) = self.values.get(&n) {
            return Ok(*v);
        }
        let fact = factorize(n)?;
        let vertices = ((1u64 << fact.k_total()) - 1) * euler_phi(&fact);
        let value = if vertices <= self.cap as u64 {
            let g = build_cl2(
                n,
                BuildOptions {
                    include_zero_block: false,
                    vertex_cap: self.cap,
                },
            )?;
            Some(wiener_bruteforce(&g))
        } else {
            None
        };
        self.values.insert(n, value);
        Ok(value)
    }
}

fn coefficient_row(
    location: String,
    k: u32,
    parity: ParityCase,
    printed_r: Option<u64>,
    printed: Coefficients,
    cache: &mut OracleCache,
) -> Result<CoefficientRow> {
    let computed = coefficient_table(k, parity)?;
    let n = smallest_modulus(k, parity);
    let phi = euler_phi(&factorize(n)?);
    let witness = Witness {
        n,
        phi,
        printed_value: printed.evaluate(phi),
        computed_value: computed.evaluate(phi),
        oracle: cache.wiener(n)?,
    };
    Ok(CoefficientRow {
        location,
        k,
        parity,
        printed_r,
        computed_r: parity.self_inverse_count(k),
        printed,
        computed,
        corrected: corrected_coefficient_table(k, parity)?,
        witness,
    })
}

fn witness_note(w: &Witness) -> Option<String> {
    w.oracle.map(|o| {
        format!(
            "n={}: W={} (printed row gives {}, recomputed row gives {})",
            w.n, o, w.printed_value, w.computed_value
        )
    })
}

/// Rebuild every table and collect the mismatches. Oracle values are computed
/// for witnesses with at most `witness_cap` vertices.
pub fn regenerate_tables(witness_cap: usize) -> Result<TablesReport> {
    let mut cache = OracleCache {
        cap: witness_cap,
        values: BTreeMap::new(),
    };
    let mut errata = Vec::new();

    let mut coefficient_rows = Vec::new();
    for (i, &(shape, k, parity, printed_r, printed)) in PRINTED_TABLE1.iter().enumerate() {
        let location = format!("Table 1 row {} (n = {shape})", i + 1);
        let row = coefficient_row(location, k, parity, Some(printed_r), printed, &mut cache)?;
        if row.printed != row.computed {
            errata.push(ErrataEntry {
                location: row.location.clone(),
                printed: row.printed.to_string(),
                computed: row.computed.to_string(),
                oracle: witness_note(&row.witness),
            });
        }
        if Some(row.computed_r) != row.printed_r {
            errata.push(ErrataEntry {
                location: format!("{} r", row.location),
                printed: printed_r.to_string(),
                computed: row.computed_r.to_string(),
                oracle: None,
            });
        }
        coefficient_rows.push(row);
    }

    let mut phi_rows = Vec::new();
    for &(moduli, printed_phi, printed_wiener) in &PRINTED_TABLE2 {
        for &n in moduli {
            let fact = factorize(n)?;
            let row = PhiTableRow {
                n,
                printed_phi,
                phi: euler_phi(&fact),
                printed_wiener,
                computed: wiener_closed(&fact)?,
                oracle: cache.wiener(n)?,
            };
            if row.phi != printed_phi {
                errata.push(ErrataEntry {
                    location: format!("Table 2 phi, n={n}"),
                    printed: printed_phi.to_string(),
                    computed: row.phi.to_string(),
                    oracle: None,
                });
            }
            if row.computed != WienerIndex::Finite(printed_wiener) {
                errata.push(ErrataEntry {
                    location: format!("Table 2 W, n={n}"),
                    printed: printed_wiener.to_string(),
                    computed: row.computed.to_string(),
                    oracle: row.oracle.map(|o| o.to_string()),
                });
            }
            phi_rows.push(row);
        }
    }

    let mut corollary_rows = Vec::new();
    for &(label, k, parity, printed) in &PRINTED_COROLLARY {
        let row = coefficient_row(
            format!("Corollary: {label}"),
            k,
            parity,
            None,
            printed,
            &mut cache,
        )?;
        if row.printed != row.computed {
            errata.push(ErrataEntry {
                location: row.location.clone(),
                printed: row.printed.to_string(),
                computed: row.computed.to_string(),
                oracle: witness_note(&row.witness),
            });
        }
        corollary_rows.push(row);
    }

    let mut oracle_disagreements = Vec::new();
    for row in coefficient_rows.iter().chain(&corollary_rows) {
        let Some(oracle) = row.witness.oracle else {
            continue;
        };
        let fact = factorize(row.witness.n)?;
        let closed = wiener_closed(&fact)?;
        if closed != oracle {
            oracle_disagreements.push(OracleDisagreement {
                location: row.location.clone(),
                n: row.witness.n,
                closed,
                corrected: wiener_closed_corrected(&fact)?,
                oracle,
            });
        }
    }

    Ok(TablesReport {
        coefficient_rows,
        phi_rows,
        corollary_rows,
        errata,
        oracle_disagreements,
    })
}

fn coefficient_line(s: &mut String, row: &CoefficientRow) {
    let w = &row.witness;
    let _ = writeln!(
        s,
        "  {:<44} k={} r={:<3} printed {:<20} computed {:<20} corrected {:<20} witness n={} oracle {}",
        row.location,
        row.k,
        row.computed_r,
        row.printed.to_string(),
        row.computed.to_string(),
        row.corrected.to_string(),
        w.n,
        w.oracle.map_or_else(|| "-".to_string(), |o| o.to_string()),
    );
}

impl TablesReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn render_text(&self, with_errata: bool) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "Coefficient table: W = (a x^2 - b x + c) / 2 with x = phi(n), rows as (a,b,c)"
        );
        for row in &self.coefficient_rows {
            coefficient_line(&mut s, row);
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "phi(n) versus W(Cl2(Z_n)), one row per n");
        let _ = writeln!(
            s,
            "  {:>4} {:>4} {:>8} {:>8} {:>8}",
            "n", "phi", "printed", "closed", "oracle"
        );
        for row in &self.phi_rows {
            let _ = writeln!(
                s,
                "  {:>4} {:>4} {:>8} {:>8} {:>8}",
                row.n,
                row.phi,
                row.printed_wiener,
                row.computed.to_string(),
                row.oracle
                    .map_or_else(|| "-".to_string(), |o| o.to_string())
            );
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "Two- and three-prime formulas");
        for row in &self.corollary_rows {
            coefficient_line(&mut s, row);
        }
        if with_errata {
            let _ = writeln!(s);
            let _ = writeln!(
                s,
                "Errata (printed value differs from the recomputed one): {}",
                self.errata.len()
            );
            for e in &self.errata {
                let _ = writeln!(
                    s,
                    "  {}: printed {}, computed {}{}",
                    e.location,
                    e.printed,
                    e.computed,
                    e.oracle
                        .as_ref()
                        .map_or_else(String::new, |o| format!(", oracle {o}"))
                );
            }
            let _ = writeln!(s);
            let _ = writeln!(
                s,
                "Closed form versus oracle at witness moduli: {} disagreement(s)",
                self.oracle_disagreements.len()
            );
            for d in &self.oracle_disagreements {
                let _ = writeln!(
                    s,
                    "  {} n={}: closed {}, corrected {}, oracle {}",
                    d.location, d.n, d.closed, d.corrected, d.oracle
                );
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witnesses() {
        assert_eq!(smallest_modulus(2, ParityCase::TwiceOdd), 6);
        assert_eq!(smallest_modulus(3, ParityCase::TwiceOdd), 30);
        assert_eq!(smallest_modulus(2, ParityCase::Odd), 15);
        assert_eq!(smallest_modulus(3, ParityCase::Odd), 105);
    }

    #[test]
    fn phi_table_errata_are_exactly_four() {
        let report = regenerate_tables(DEFAULT_WITNESS_CAP).unwrap();
        let table2: Vec<_> = report
            .errata
            .iter()
            .filter(|e| e.location.starts_with("Table 2"))
            .map(|e| {
                (
                    e.location.as_str(),
                    e.printed.as_str(),
                    e.computed.as_str(),
                    e.oracle.as_deref(),
                )
            })
            .collect();
        assert_eq!(
            table2,
            vec![
                ("Table 2 W, n=12", "110", "114", Some("114")),
                ("Table 2 W, n=20", "488", "492", Some("492")),
                ("Table 2 W, n=24", "488", "500", Some("500")),
                ("Table 2 W, n=36", "1138", "1142", Some("1142")),
            ]
        );
    }

    #[test]
    fn first_coefficient_row_matches_print() {
        let report = regenerate_tables(DEFAULT_WITNESS_CAP).unwrap();
        let row = &report.coefficient_rows[0];
        assert_eq!(row.computed, row.printed);
        assert_eq!(row.witness.oracle, Some(WienerIndex::Finite(23)));
        let row = &report.coefficient_rows[5];
        assert_eq!(
            row.computed,
            Coefficients {
                a: 17,
                b: 15,
                c: 16
            }
        );
        assert_ne!(row.printed, row.computed);
    }
}
