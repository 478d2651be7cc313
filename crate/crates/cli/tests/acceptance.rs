use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cleangraph::metrics::{
    bfs_distances, coefficient_table, diameter, distance_closed, wiener_bruteforce, wiener_closed,
    wiener_closed_corrected, wiener_decomposition_closed, wiener_decomposition_corrected,
    wiener_decomposition_oracle, Coefficients, ParityCase,
};
use cleangraph::ring::{count_self_inverse_closed, enumerate_idempotents};
use cleangraph::{
    build_cl2, construct_perfect_matching, factorize, matching_number_closed, maximum_matching,
    verify_matching, BuildOptions, CleanGraph, Distance, Vertex, WienerIndex,
};

type Outcome = Result<String, String>;

const BIN: &str = env!("CARGO_BIN_EXE_cleangraph");
const BIG: usize = 1 << 20;

fn graph(n: u64) -> CleanGraph {
    build_cl2(
        n,
        BuildOptions {
            include_zero_block: false,
            vertex_cap: BIG,
        },
    )
    .unwrap()
}

fn k_total(n: u64) -> usize {
    factorize(n).unwrap().k_total()
}

/// Moduli in `range` with at least two distinct prime factors.
fn composite_sweep(range: std::ops::RangeInclusive<u64>) -> Vec<u64> {
    range.filter(|&n| k_total(n) >= 2).collect()
}

fn run_cli(args: &[&str]) -> (i32, String, Duration) {
    let start = Instant::now();
    let out = Command::new(BIN).args(args).output().expect("spawn cli");
    let took = start.elapsed();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        took,
    )
}

fn summarize<T: std::fmt::Display>(bad: &[T]) -> String {
    let shown: Vec<_> = bad.iter().take(6).map(T::to_string).collect();
    let more = if bad.len() > shown.len() {
        format!(" (+{} more)", bad.len() - shown.len())
    } else {
        String::new()
    };
    format!("{}{more}", shown.join("; "))
}

fn worked_example() -> Outcome {
    let (code, out, took) = run_cli(&["analyze", "15", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).map_err(|e| format!("bad json: {e}"))?;
    let checks = [
        ("exit code", code == 0),
        ("wiener closed", v["wiener_closed"] == 492),
        ("wiener oracle", v["wiener_oracle"] == 492),
        ("diameter closed", v["diameter_closed"] == 3),
        ("diameter oracle", v["diameter_oracle"] == 3),
        ("vertices", v["vertices"] == 24),
        ("matching closed", v["matching_closed"] == 12),
        ("matching oracle", v["matching_oracle"] == 12),
        ("perfect matching", v["perfect_matching_verified"] == true),
        ("runtime", took < Duration::from_secs(1)),
    ];
    let failed: Vec<_> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    if failed.is_empty() {
        Ok(format!("W=492, diam 3, |V|=24, mu=12 in {took:.2?}"))
    } else {
        Err(format!("failed: {}", failed.join(", ")))
    }
}

fn oracle_sweep() -> Outcome {
    let start = Instant::now();
    let mut wiener_bad = Vec::new();
    let mut matching_bad = Vec::new();
    let sweep = composite_sweep(2..=300);
    for &n in &sweep {
        let fact = factorize(n).unwrap();
        let g = graph(n);
        let oracle = wiener_bruteforce(&g);
        let closed = wiener_closed(&fact).unwrap();
        if closed != oracle {
            let corrected = wiener_closed_corrected(&fact).unwrap();
            wiener_bad.push(format!(
                "n={n} closed {closed} oracle {oracle} corrected {corrected}"
            ));
        }
        let mu = maximum_matching(&g, BIG).unwrap().size() as u64;
        let mu_closed = matching_number_closed(&fact).unwrap();
        if mu != mu_closed || 2 * mu != g.vertex_count() as u64 {
            matching_bad.push(format!(
                "n={n} closed {mu_closed} blossom {mu} |V| {}",
                g.vertex_count()
            ));
        }
    }
    let took = start.elapsed();
    if took > Duration::from_secs(300) {
        return Err(format!("runtime {took:.2?}"));
    }
    if wiener_bad.is_empty() && matching_bad.is_empty() {
        return Ok(format!("{} moduli in {took:.2?}", sweep.len()));
    }
    Err(format!(
        "wiener mismatches at {} of {} moduli: {}; matching mismatches {}{}",
        wiener_bad.len(),
        sweep.len(),
        summarize(&wiener_bad),
        matching_bad.len(),
        if matching_bad.is_empty() {
            String::new()
        } else {
            format!(": {}", summarize(&matching_bad))
        },
    ))
}

fn lemma_distances() -> Outcome {
    let mut pairs = 0u64;
    let mut bad = Vec::new();
    for n in composite_sweep(6..=120) {
        let g = graph(n);
        let vs: Vec<Vertex> = g.vertices().to_vec();
        for (i, &v) in vs.iter().enumerate() {
            let bfs = bfs_distances(&g, i).unwrap();
            for (j, &w) in vs.iter().enumerate().skip(i + 1) {
                pairs += 1;
                let closed = distance_closed(v, w, g.ring()).unwrap();
                if closed != bfs[j] {
                    bad.push(format!("n={n} {v}-{w} closed {closed} bfs {}", bfs[j]));
                }
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{pairs} pairs"))
    } else {
        Err(format!("{} mismatches: {}", bad.len(), summarize(&bad)))
    }
}

fn decomposition() -> Outcome {
    let mut bad = Vec::new();
    let mut corrected_bad = 0;
    let sweep = composite_sweep(6..=120);
    for &n in &sweep {
        let fact = factorize(n).unwrap();
        let g = graph(n);
        let closed = wiener_decomposition_closed(&fact).unwrap();
        let oracle = wiener_decomposition_oracle(&g).unwrap();
        if wiener_decomposition_corrected(&fact).unwrap() != oracle {
            corrected_bad += 1;
        }
        let w = wiener_bruteforce(&g).finite().unwrap();
        if oracle.s1 + oracle.s2 + oracle.s3 + oracle.s4 != w {
            bad.push(format!("n={n} oracle S1+S2+S3+S4 != W"));
        }
        if closed.s1 + closed.s2 + closed.s3 + closed.s4 != closed.total {
            bad.push(format!("n={n} closed S1+S2+S3+S4 != closed W"));
        }
        let diff: Vec<_> = closed
            .components()
            .iter()
            .zip(oracle.components())
            .filter(|(c, o)| c.1 != o.1)
            .map(|(c, o)| format!("{} {} vs {}", c.0, c.1, o.1))
            .collect();
        if !diff.is_empty() {
            bad.push(format!("n={n} {}", diff.join(", ")));
        }
    }
    if bad.is_empty() {
        Ok(format!("{} moduli, all seven components", sweep.len()))
    } else {
        Err(format!(
            "{} of {} moduli differ: {}; corrected decomposition differs at {corrected_bad}",
            bad.len(),
            sweep.len(),
            summarize(&bad)
        ))
    }
}

/// Square roots of 1 and idempotents of `Z_n` counted by walking `x` through
/// `[0, n)` and updating `x^2` and `x^2 - x` incrementally.
fn brute_counts(n: u64) -> (u64, u64) {
    let (mut sq, mut idem, mut two_x) = (0u64, 0u64, 0u64);
    let (mut roots, mut idems) = (0, 0);
    let one = 1 % n;
    for _ in 0..n {
        roots += u64::from(sq == one);
        idems += u64::from(idem == 0);
        // (x+1)^2 = x^2 + 2x + 1 and (x+1)x = x(x-1) + 2x
        sq += two_x + 1;
        while sq >= n {
            sq -= n;
        }
        idem += two_x;
        if idem >= n {
            idem -= n;
        }
        two_x += 2;
        while two_x >= n {
            two_x -= n;
        }
    }
    (roots, idems)
}

fn ring_sweeps() -> (Outcome, Outcome) {
    let start = Instant::now();
    let (mut bad_roots, mut bad_idem) = (Vec::new(), Vec::new());
    for n in 2..=100_000u64 {
        let (roots, idems) = brute_counts(n);
        let fact = factorize(n).unwrap();
        let r = count_self_inverse_closed(&fact).unwrap();
        if r != roots {
            bad_roots.push(format!("n={n} closed {r} brute {roots}"));
        }
        let listed = enumerate_idempotents(&fact);
        if listed.len() as u64 != 1 << fact.k_total() || listed.len() as u64 != idems {
            bad_idem.push(format!(
                "n={n} listed {} brute {idems} 2^k {}",
                listed.len(),
                1u64 << fact.k_total()
            ));
        }
    }
    let took = start.elapsed();
    let roots = if !bad_roots.is_empty() {
        Err(format!(
            "{} mismatches: {}",
            bad_roots.len(),
            summarize(&bad_roots)
        ))
    } else if took > Duration::from_secs(60) {
        Err(format!("runtime {took:.2?}"))
    } else {
        Ok(format!("n in [2,1e5] in {took:.2?}"))
    };
    let idem = if bad_idem.is_empty() {
        Ok("n in [2,1e5]".to_string())
    } else {
        Err(format!(
            "{} mismatches: {}",
            bad_idem.len(),
            summarize(&bad_idem)
        ))
    };
    (roots, idem)
}

fn diameters() -> Outcome {
    let mut bad = Vec::new();
    let sweep = composite_sweep(2..=300);
    for &n in &sweep {
        let d = diameter(&graph(n));
        if d != Distance::Finite(3) {
            bad.push(format!("n={n} diameter {d}"));
        }
    }
    for n in [4u64, 8, 9, 25, 27, 32] {
        let g = graph(n);
        let one = g.vertex_index(Vertex { e: 1, u: 1 }).unwrap();
        if diameter(&g) != Distance::Infinite || g.degree(one) != 0 {
            bad.push(format!("n={n} not disconnected at (1,1)"));
        }
    }
    if bad.is_empty() {
        Ok(format!(
            "{} connected graphs at 3, six prime powers disconnected",
            sweep.len()
        ))
    } else {
        Err(summarize(&bad))
    }
}

fn table_two() -> Outcome {
    let printed: [(u64, u128); 6] = [
        (6, 23),
        (10, 110),
        (14, 265),
        (18, 265),
        (22, 779),
        (26, 1138),
    ];
    let mut bad = Vec::new();
    for (n, w) in printed {
        let oracle = wiener_bruteforce(&graph(n));
        let closed = wiener_closed(&factorize(n).unwrap()).unwrap();
        if oracle != WienerIndex::Finite(w) || closed != oracle {
            bad.push(format!("n={n} printed {w} closed {closed} oracle {oracle}"));
        }
    }
    let expected_errata: [(u64, u128, u128); 4] = [
        (12, 110, 114),
        (20, 488, 492),
        (24, 488, 500),
        (36, 1138, 1142),
    ];
    for (n, _, value) in expected_errata {
        let oracle = wiener_bruteforce(&graph(n));
        if oracle != WienerIndex::Finite(value) {
            bad.push(format!("n={n} oracle {oracle}, fixture {value}"));
        }
    }
    let (code, out, _) = run_cli(&["tables", "--errata"]);
    if code != 0 {
        bad.push(format!("tables exit {code}"));
    }
    let listed: Vec<&str> = out
        .lines()
        .map(str::trim)
        .filter(|l| l.starts_with("Table 2 W, n="))
        .collect();
    let wanted: Vec<String> = expected_errata
        .iter()
        .map(|(n, p, v)| format!("Table 2 W, n={n}: printed {p}, computed {v}, oracle {v}"))
        .collect();
    if listed != wanted {
        bad.push(format!("errata lines {listed:?}"));
    }
    if bad.is_empty() {
        Ok("six printed values reproduced, errata exactly n=12,20,24,36".to_string())
    } else {
        Err(summarize(&bad))
    }
}

fn corollary() -> Outcome {
    let mut bad = Vec::new();
    let expect = [
        (2, ParityCase::Odd, (17, 15, 16)),
        (2, ParityCase::TwiceOdd, (17, 15, 8)),
        (3, ParityCase::Odd, (93, 59, 64)),
        (3, ParityCase::TwiceOdd, (93, 59, 32)),
    ];
    for (k, parity, (a, b, c)) in expect {
        let got = coefficient_table(k, parity).unwrap();
        if got != (Coefficients { a, b, c }) {
            bad.push(format!("k={k} {parity:?} got {got}"));
        }
    }
    let (code, out, _) = run_cli(&["tables", "--json"]);
    let v: serde_json::Value =
        serde_json::from_str(&out).map_err(|e| format!("tables json (exit {code}): {e}"))?;
    let errata: Vec<String> = v["errata"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["location"].as_str().unwrap().to_string())
        .collect();
    let rows = v["coefficient_rows"].as_array().unwrap();
    let mut flagged = 0;
    let mut confirmed = 0;
    for row in rows {
        let loc = row["location"].as_str().unwrap();
        let mismatch = row["printed"]["a"] != row["computed"]["a"];
        if mismatch {
            flagged += 1;
            if !errata.iter().any(|e| e.starts_with(loc)) {
                bad.push(format!("{loc} not flagged"));
            }
            if !row["witness"]["oracle"].is_null() {
                confirmed += 1;
            }
        }
    }
    let led: Vec<(i64, i64)> = rows
        .iter()
        .map(|r| {
            (
                r["printed"]["a"].as_i64().unwrap(),
                r["computed"]["a"].as_i64().unwrap(),
            )
        })
        .collect();
    for needed in [(29, 93), (181, 437)] {
        if !led.contains(&needed) {
            bad.push(format!(
                "no row with printed {} / computed {}",
                needed.0, needed.1
            ));
        }
    }
    if bad.is_empty() {
        Ok(format!(
            "corollary rows verbatim, {flagged} table rows flagged, {confirmed} oracle-confirmed"
        ))
    } else {
        Err(summarize(&bad))
    }
}

fn perfect_matchings() -> Outcome {
    let mut bad = Vec::new();
    let sweep = composite_sweep(6..=300);
    for &n in &sweep {
        let g = graph(n);
        match construct_perfect_matching(&g) {
            Ok(m) => {
                let check = verify_matching(&g, &m);
                if !(check.valid && check.perfect) {
                    bad.push(format!("n={n} {check:?}"));
                }
            }
            Err(e) => bad.push(format!("n={n} {e}")),
        }
    }
    if bad.is_empty() {
        Ok(format!("{} moduli", sweep.len()))
    } else {
        Err(summarize(&bad))
    }
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for jobs in ["1", "3", "8"] {
        let path = dir.path().join(format!("scan{jobs}.csv"));
        let (code, _, _) = run_cli(&[
            "scan",
            "2",
            "200",
            "-o",
            path.to_str().unwrap(),
            "--jobs",
            jobs,
        ]);
        // disagreeing rows give exit 2 but still write the file
        if code != 0 && code != 2 {
            return Err(format!("scan --jobs {jobs} exit {code}"));
        }
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    if outputs.windows(2).all(|w| w[0] == w[1]) {
        Ok(format!(
            "{} bytes identical across 1, 3 and 8 workers",
            outputs[0].len()
        ))
    } else {
        Err("CSV bytes differ between pool sizes".to_string())
    }
}

fn main() -> ExitCode {
    let (roots, idems) = ring_sweeps();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 worked example n=15", worked_example()),
        ("2 oracle-equivalence sweep [2,300]", oracle_sweep()),
        ("3 distance lemma [6,120]", lemma_distances()),
        ("4 Wiener decomposition [6,120]", decomposition()),
        ("5 self-inverse count [2,1e5]", roots),
        ("6 idempotent count [2,1e5]", idems),
        ("7 diameter and disconnection", diameters()),
        ("8 phi table and errata", table_two()),
        ("9 corollary coefficients", corollary()),
        ("10 perfect matching construction", perfect_matchings()),
        ("11 scan determinism", determinism()),
    ];
    let mut failures = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} passed, {failures} failed", results.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
