//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use fbcode::cache::{build_standard_cache, FoptCache};
use fbcode::constructions::{best_z_family, ZFamilySource};
use fbcode::formats::{strategy_from_json, strategy_to_json};
use fbcode::tables::{self, reproduce, Context, DISTRIBUTIONS, FREE_POINTS};
use fbcode_core::bounds::{BoundProblem, WeightDistribution};
use fbcode_core::games::{symmetric_winnable, Game, GameState, Oracle};
use fbcode_core::search::{bsc_max_code, hamming_code, SearchLimit};
use fbcode_core::strategy::*;
use fbcode_core::verify::verify_strategy;
use fbcode_core::{ErrorGraph, FeedbackStrategy, NonadaptiveCode, Word};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn verified(s: &FeedbackStrategy) -> bool {
    verify_strategy(s).passed()
}

const MAD: [u128; 14] = [2, 2, 4, 8, 16, 28, 50, 92, 170, 314, 584, 1092, 2048, 3854];
const M1: [u64; 14] = [2, 2, 4, 8, 16, 28, 50, 90, 168, 312, 580, 1088, 2048, 3854];

fn criterion_1() -> Outcome {
    let got: Vec<u128> = (3..=16).map(m_ad).collect();
    outcome(got == MAD, format!("m_ad(3..=16) = {got:?}"))
}

fn criterion_2() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=13 {
        let m = m_ad(n) as u64;
        if !symmetric_winnable(GameState::new(m, 0, n)) || symmetric_winnable(GameState::new(m + 1, 0, n)) {
            bad.push(n);
        }
    }
    outcome(bad.is_empty(), format!("game threshold equals m_ad for n = 1..=13; mismatches {bad:?}"))
}

fn criterion_3() -> Outcome {
    let mut book = BscCodeBook::default();
    let mut ok = true;
    let mut cells = Vec::new();
    for (i, &want) in M1.iter().enumerate() {
        let n = i + 3;
        let hamming = corollary1_best(n).unwrap().1;
        let best = match best_one_feedback_bsc_plan(n, &mut book) {
            Ok(c) => c.count,
            Err(_) => 0,
        };
        let fine = if tables::M1_GAP_LENGTHS.contains(&n) { best <= want } else { best == want };
        ok &= fine && hamming <= best;
        cells.push(format!("{n}:{best}/{want}(hamming {hamming})"));
    }
    outcome(ok, cells.join(" "))
}

fn criterion_4() -> Outcome {
    let mut book = BscCodeBook::default();
    let mut ok = true;
    let mut cells = Vec::new();
    for n in 10..=16 {
        match build_two_feedback(n, &mut book) {
            Ok(s) => {
                let count_ok = s.len() as u128 == m_ad(n) && s.feedbacks() == 2;
                let check = if n <= 13 { verified(&s) } else { true };
                ok &= count_ok && check;
                cells.push(format!("{n}:{}{}", s.len(), if n <= 13 { " verified" } else { "" }));
            }
            Err(e) => {
                ok = false;
                cells.push(format!("{n}:error {e}"));
            }
        }
    }
    outcome(ok, cells.join(" "))
}

fn criterion_5() -> Outcome {
    let eight = assemble_one_feedback(&example_family_8());
    let nested = ["0000", "0011", "1100", "1111"];
    let code = |m: u64| {
        let words = nested[..m as usize].iter().map(|s| Word::parse(s, 2).unwrap()).collect();
        NonadaptiveCode::new(4, 1, ErrorGraph::z_channel(), words).unwrap()
    };
    let nine = corollary2_optimize(5, 4, &[(2, 12), (3, 9), (4, 4)])
        .and_then(|p| corollary2_family(&p, &code))
        .and_then(|f| assemble_one_feedback(&f));
    match (eight, nine) {
        (Ok(a), Ok(b)) => {
            let (va, vb) = (verified(&a), verified(&b));
            outcome(
                a.len() == 53 && b.len() == 96 && va && vb,
                format!("length 8: {} messages verified {va}; length 9: {} messages verified {vb}", a.len(), b.len()),
            )
        }
        (a, b) => outcome(false, format!("assembly failed: {:?} {:?}", a.err(), b.err())),
    }
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut cells = Vec::new();
    for (n, m, want) in [(6, 12, 16), (7, 18, 49), (8, 36, 76), (9, 62, 177)] {
        let started = Instant::now();
        let got = BoundProblem::new(n, m, 1).and_then(|p| p.upper_bound()).map(|r| r.free_points);
        let fine = got == Ok(want) && started.elapsed() < Duration::from_secs(60);
        ok &= fine;
        cells.push(format!("({n},{m}):{}", got.map_or("error".to_string(), |f| f.to_string())));
    }
    outcome(ok, cells.join(" "))
}

fn criterion_7(cache: &FoptCache, elapsed: Duration) -> Outcome {
    let mut pairs = 0;
    let mut misses = Vec::new();
    for (n, row) in FREE_POINTS {
        for (m, f) in row {
            match cache.get(n, m) {
                Some(e) if e.free_points == f => pairs += 1,
                Some(e) => misses.push(format!("F({n},{m}) = {} not {f}", e.free_points)),
                None => misses.push(format!("({n},{m}) missing")),
            }
        }
    }
    let mut dists = 0;
    for (n, m, z) in DISTRIBUTIONS {
        let Some(e) = cache.get(n, m) else { continue };
        let got = e.distribution.to_string();
        if got == z || ((n, m) == (7, 17) && got == tables::ALT_7_17) {
            dists += 1;
        } else {
            let printed: WeightDistribution = z.parse().unwrap();
            misses.push(format!(
                "({n},{m}) distribution {got} not {z} (printed one has {} free points)",
                printed.free_points(1)
            ));
        }
    }
    let ok = pairs == 20 && dists == 5 && elapsed < Duration::from_secs(600);
    outcome(
        ok,
        format!("{pairs}/20 pairs, {dists}/5 distributions, search {:.1}s; {}", elapsed.as_secs_f64(), misses.join("; ")),
    )
}

fn criterion_8() -> Outcome {
    let want = [11u64, 20, 36, 66, 121, 223, 415, 774, 1452];
    let mut o = Oracle::new(Game::HalfLie);
    let got: Vec<u64> = (5..=13).map(|n| o.max_messages(n)).collect();
    outcome(got == want, format!("half-lie maxima n = 5..=13: {got:?}"))
}

fn criterion_9(cache: &FoptCache) -> Outcome {
    let mut ctx = Context::new(Some(cache.clone()));
    let report = match reproduce(4, &mut ctx) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let cor2: Vec<String> = (5..=13).map(|n| report.cell("corollary2", &n.to_string()).unwrap().got.clone()).collect();
    let thm1: Vec<String> = (5..=13).map(|n| report.cell("theorem1", &n.to_string()).unwrap().got.clone()).collect();
    let mut stored_ok = true;
    for (n, want) in [(8, 53), (9, 97), (11, 329)] {
        match best_z_family(cache, n) {
            Ok((ZFamilySource::Stored, f)) => {
                let s = assemble_one_feedback(&f);
                stored_ok &= f.message_count() == want && s.is_ok_and(|s| verified(&s));
            }
            _ => stored_ok = false,
        }
    }
    outcome(
        report.passed() && stored_ok,
        format!("corollary 2 {cor2:?}; theorem 1 {thm1:?}; stored families verified {stored_ok}"),
    )
}

fn criterion_10(cache: &FoptCache) -> Outcome {
    let mut book = BscCodeBook::default();
    let mut strategies: Vec<(String, FeedbackStrategy)> = Vec::new();
    let mut errors = Vec::new();
    let mut push = |name: String, s: Result<FeedbackStrategy, String>| match s {
        Ok(s) => strategies.push((name, s)),
        Err(e) => errors.push(format!("{name}: {e}")),
    };
    for n in 3..=16 {
        let (k, _) = corollary1_best(n).unwrap();
        push(format!("hamming {n}"), corollary1_strategy(n, k).map_err(|e| e.to_string()));
        push(format!("one-feedback {n}"), best_one_feedback_bsc(n, &mut book).map_err(|e| e.to_string()));
        push(format!("two-feedback {n}"), build_two_feedback(n, &mut book).map_err(|e| e.to_string()));
    }
    for n in 1..=12 {
        push(format!("complete {n}"), build_complete_feedback(n).map_err(|e| e.to_string()));
    }
    for n in 5..=13 {
        match best_z_family(cache, n) {
            Ok((_, f)) => push(format!("z {n}"), assemble_one_feedback(&f).map_err(|e| e.to_string())),
            Err(e) => push(format!("z {n}"), Err(e.to_string())),
        }
    }
    push("z weights 9".into(), assemble_one_feedback(&example_weight_family_9()).map_err(|e| e.to_string()));
    let failing: Vec<&String> = strategies.iter().filter(|(_, s)| !verified(s)).map(|(n, _)| n).collect();
    let a = failing.is_empty() && errors.is_empty();

    let mut codes: Vec<NonadaptiveCode> = cache.entries().map(|e| e.code()).collect();
    codes.extend((1..=4).map(|k| hamming_code(k).unwrap()));
    codes.extend((1..=12).map(|n| bsc_max_code(n, 2_000_000).unwrap().code));
    let b = codes.iter().all(|c| c.validate().passed());

    let mut c = true;
    for n in 2..=9 {
        let base = BoundProblem::new(n, 1, 1).unwrap();
        let mut last = i64::MAX;
        for e in cache.length(n) {
            let bound = base.with_cardinality(e.m).and_then(|p| p.upper_bound()).map(|r| r.free_points);
            match bound {
                Ok(f) => {
                    c &= f <= last && e.free_points <= f;
                    last = f;
                }
                Err(_) => c = false,
            }
        }
    }

    let d = (1..=30).all(|n| m_ad(n) <= (1u128 << n) / (n as u128 + 1));

    let e = strategies.iter().step_by(5).all(|(_, s)| {
        let text = strategy_to_json(s);
        strategy_from_json(&text).is_ok_and(|back| &back == s && strategy_to_json(&back) == text)
    });
    let mut detail = format!(
        "(a) {} strategies, failing {failing:?} {errors:?} (b) {} codes valid {b} (c) bound monotone {c} (d) {d} (e) round trip {e}",
        strategies.len(),
        codes.len()
    );
    if !a {
        detail.push_str(" [strategy failures]");
    }
    outcome(a && b && c && d && e, detail)
}

fn main() {
    let started = Instant::now();
    let cache = build_standard_cache(SearchLimit::default());
    let search_time = started.elapsed();
    let mut results: Vec<(usize, Outcome, Duration)> = Vec::new();
    let mut timed = |id: usize, f: &mut dyn FnMut() -> Outcome| {
        let started = Instant::now();
        let o = f();
        // the search itself counts towards criterion 7
        let extra = if id == 7 { search_time } else { Duration::ZERO };
        results.push((id, o, started.elapsed() + extra));
    };
    timed(1, &mut criterion_1);
    timed(2, &mut criterion_2);
    timed(3, &mut criterion_3);
    timed(4, &mut criterion_4);
    timed(5, &mut criterion_5);
    timed(6, &mut criterion_6);
    match &cache {
        Ok(cache) => {
            timed(7, &mut || criterion_7(cache, search_time));
            timed(8, &mut criterion_8);
            timed(9, &mut || criterion_9(cache));
            timed(10, &mut || criterion_10(cache));
        }
        Err(e) => {
            timed(7, &mut || outcome(false, format!("search failed: {e}")));
            timed(8, &mut criterion_8);
            timed(9, &mut || outcome(false, "no cache"));
            timed(10, &mut || outcome(false, "no cache"));
        }
    }
    // time budgets per criterion
    let budget = |id: usize| match id {
        1 | 3 => Duration::from_secs(1),
        2 => Duration::from_secs(300),
        4 => Duration::from_secs(120),
        5 | 9 => Duration::from_secs(60),
        6 => Duration::from_secs(240),
        7 => Duration::from_secs(4200),
        8 => Duration::from_secs(600),
        _ => Duration::from_secs(1800),
    };
    let mut failed = 0;
    for (id, o, took) in &results {
        let pass = o.pass && *took <= budget(*id);
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {id:>2}: {} ({:.2}s) {}",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            o.detail
        );
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
