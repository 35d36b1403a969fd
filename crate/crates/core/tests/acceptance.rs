//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! failure status if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{
    fixture, golden_expectations, read_fixture, run_query, smith, RelationalOracle, TermGen,
};
use kisp::batch::semantically_equal;
use kisp::family::Constraint;
use kisp::interp::lexer::tokenize;
use kisp::interp::parse_program;
use kisp::interp::parser::KEYWORDS;
use kisp::semantics::singleton;
use kisp::temporal::{after, before, during};
use kisp::tree_file::load_tree;
use kisp::{
    eval_inverse_oracle, eval_term, BasicKin, KinTerm, PersonSet, ReductionDictionary, Segment,
    TimePoint, Timeline, TraditionalTree,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(
        elapsed < limit,
        format!("took {elapsed:.2?}, limit {limit:?}"),
    )
}

fn golden_queries() -> Outcome {
    let start = Instant::now();
    let tree = Arc::new(smith());
    let expected = golden_expectations(&tree);
    for (name, lines) in &expected {
        let got = run_query(&tree, name);
        check(
            &got == lines,
            format!("{name}: got {got:?}, expected {lines:?}"),
        )?;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("{} programs match the oracle, ((twice square) 2) = 16, ((compose inc inc) 0) = 2, {elapsed:.2?}", expected.len()))
}

fn semantic_laws() -> Outcome {
    let start = Instant::now();
    let tree = smith();
    let oracle = RelationalOracle::new(&tree);
    let persons = oracle.persons.clone();
    let gen = TermGen {
        operators: true,
        max_depth: 6,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures: Vec<String> = Vec::new();
    let mut fail = |law: &str, t: &KinTerm| failures.push(format!("{law}: {t}"));
    let sub = |rng: &mut ChaCha8Rng| -> PersonSet {
        persons
            .iter()
            .copied()
            .filter(|_| rng.random_bool(0.5))
            .collect()
    };
    const TERMS: usize = 1000;
    for _ in 0..TERMS {
        let t = gen.term(&mut rng, 6);
        let rel = oracle.relation(&t);

        for &p in &persons {
            if eval_term(&tree, &t, &singleton(p)) != oracle.apply(&rel, &singleton(p)) {
                fail("relational oracle", &t);
            }
        }

        let a = sub(&mut rng);
        let b: PersonSet = a.union(&sub(&mut rng)).copied().collect();
        if !eval_term(&tree, &t, &a).is_subset(&eval_term(&tree, &t, &b)) {
            fail("monotonicity", &t);
        }

        let (x, y) = (sub(&mut rng), sub(&mut rng));
        let xy: PersonSet = x.union(&y).copied().collect();
        let split: PersonSet = eval_term(&tree, &t, &x)
            .union(&eval_term(&tree, &t, &y))
            .copied()
            .collect();
        if eval_term(&tree, &t, &xy) != split {
            fail("union distributivity", &t);
        }

        let inv = KinTerm::inverse(t.clone());
        for &u in &persons {
            let back = eval_term(&tree, &inv, &singleton(u));
            if back != eval_inverse_oracle(&tree, &t, &singleton(u)) {
                fail("inverse scan", &t);
            }
            for &v in &persons {
                if back.contains(&v) != eval_term(&tree, &t, &singleton(v)).contains(&u) {
                    fail("inverse adjointness", &t);
                }
            }
        }

        let dual = KinTerm::dual(t.clone());
        if !semantically_equal(&tree, &dual, &dual.push_dual()) {
            fail("dual pushdown", &t);
        }

        let (b, c) = (gen.term(&mut rng, 2), gen.term(&mut rng, 2));
        let left = KinTerm::concat(t.clone(), KinTerm::fork(b.clone(), c.clone()));
        let left_split = KinTerm::fork(
            KinTerm::concat(t.clone(), b.clone()),
            KinTerm::concat(t.clone(), c.clone()),
        );
        let right = KinTerm::concat(KinTerm::fork(b.clone(), c.clone()), t.clone());
        let right_split =
            KinTerm::fork(KinTerm::concat(b, t.clone()), KinTerm::concat(c, t.clone()));
        if !semantically_equal(&tree, &left, &left_split)
            || !semantically_equal(&tree, &right, &right_split)
        {
            fail("concat over fork", &t);
        }
    }
    let elapsed = start.elapsed();
    check(
        failures.is_empty(),
        format!(
            "{} counterexamples, first: {}",
            failures.len(),
            failures.first().map_or("", |s| s)
        ),
    )?;
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "{TERMS} terms, 0 counterexamples across 5 laws and the relational oracle, {elapsed:.2?}"
    ))
}

fn reduction_round_trip() -> Outcome {
    let start = Instant::now();
    let tree = smith();
    let oracle = RelationalOracle::new(&tree);
    let dict = ReductionDictionary::english();
    let gen = TermGen {
        operators: false,
        max_depth: 6,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut reduced_somewhere = 0;
    for i in 0..100 {
        let t = if i % 2 == 0 {
            gen.chain(&mut rng, 6)
        } else {
            gen.term(&mut rng, 6)
        };
        let r = dict.shorten(&t);
        if r.words().next().is_some() {
            reduced_somewhere += 1;
        }
        let back = dict.expand(&r).map_err(|e| format!("{t}: {e}"))?;
        check(
            oracle.relation(&t) == oracle.relation(&back),
            format!("{t} expands to {back}"),
        )?;
    }
    let mappings = [
        ("son (father | mother)", "brother"),
        ("daughter (father | mother)", "sister"),
        ("father (father | mother)", "grandfather"),
        ("mother (father | mother)", "grandmother"),
        ("son (son | daughter)", "grandson"),
        (
            "father (son | daughter) (wife | husband) (son | daughter)",
            "co-father-in-law",
        ),
        ("daughter . husband", "daughter-in-law"),
        (
            "mother (husband | wife) (son | daughter)",
            "co-mother-in-law",
        ),
    ];
    let mut exact = 0;
    for (src, word) in mappings {
        let r = dict.shorten(&src.parse().unwrap());
        if r.segments == [Segment::Word(word.into())] {
            exact += 1;
        }
    }
    check(
        exact == mappings.len(),
        format!("{exact}/{} mappings reduce exactly", mappings.len()),
    )?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("100/100 round trips equal ({reduced_somewhere} used a word), {exact}/{} mappings exact, {elapsed:.2?}", mappings.len()))
}

fn greedy_vs_optimal() -> Outcome {
    let english = ReductionDictionary::english();
    let mut singles = 0;
    for (pattern, word) in english.entries() {
        let greedy = english.shorten(pattern);
        let best = english
            .optimal_shorten(pattern, 100_000)
            .map_err(|e| e.to_string())?;
        check(
            greedy == best && greedy.segments == [Segment::Word(word.into())],
            format!("{word}: greedy {greedy}, optimal {best}"),
        )?;
        singles += 1;
    }

    let trap: ReductionDictionary = read_fixture("greedy_trap.dict")
        .parse()
        .map_err(|e| format!("{e}"))?;
    let term: KinTerm = "son father mother daughter husband".parse().unwrap();
    let (greedy, best) = (
        trap.shorten(&term),
        trap.optimal_shorten(&term, 100_000)
            .map_err(|e| e.to_string())?,
    );
    check(
        best.len() < greedy.len(),
        format!("fixture: greedy {greedy}, optimal {best}"),
    )?;

    // every atom chain with at most 4 concatenations
    let mut strictly_worse = 0;
    let mut total = 0;
    for len in 1..=5u32 {
        for code in 0..6usize.pow(len) {
            let mut c = code;
            let blocks = (0..len).map(|_| {
                let k = BasicKin::ALL[c % 6];
                c /= 6;
                KinTerm::Basic(k)
            });
            let t = KinTerm::concat_all(blocks).unwrap();
            let (g, o) = (
                trap.shorten(&t).len(),
                trap.optimal_shorten(&t, 100_000)
                    .map_err(|e| e.to_string())?
                    .len(),
            );
            check(o <= g, format!("optimal longer than greedy on {t}"))?;
            if o < g {
                strictly_worse += 1;
            }
            total += 1;
        }
    }
    check(
        strictly_worse > 0,
        "enumeration found no term where greedy loses",
    )?;
    Ok(format!(
        "{singles}/{singles} single-pattern terms agree; trap fixture greedy {} vs optimal {}; greedy loses on {strictly_worse}/{total} enumerated chains",
        greedy.len(),
        best.len()
    ))
}

fn shorten_scaling() -> Outcome {
    let dict = ReductionDictionary::english();
    let gen = TermGen {
        operators: false,
        max_depth: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sizes = [32usize, 64, 128, 256];
    let mut medians = Vec::new();
    for &n in &sizes {
        let terms: Vec<KinTerm> = (0..31).map(|_| gen.chain(&mut rng, n)).collect();
        let reps = 4096 / n;
        let mut times: Vec<Duration> = terms
            .iter()
            .map(|t| {
                let start = Instant::now();
                for _ in 0..reps {
                    std::hint::black_box(dict.shorten(std::hint::black_box(t)));
                }
                start.elapsed() / reps as u32
            })
            .collect();
        times.sort();
        medians.push(times[times.len() / 2]);
    }
    let ratios: Vec<f64> = medians
        .windows(2)
        .map(|w| w[1].as_secs_f64() / w[0].as_secs_f64())
        .collect();
    let shown: Vec<String> = sizes
        .iter()
        .zip(&medians)
        .map(|(n, t)| format!("T({n})={t:.1?}"))
        .collect();
    let ratio_text: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    check(
        ratios.iter().all(|&r| r <= 5.0),
        format!("{}; ratios {}", shown.join(" "), ratio_text.join(", ")),
    )?;
    Ok(format!(
        "{}; doubling ratios {} (limit 5)",
        shown.join(" "),
        ratio_text.join(", ")
    ))
}

fn constraint_suite() -> Outcome {
    let cases = [
        ("c2_three_parents", Constraint::C2),
        ("c3_two_wives", Constraint::C3),
        ("c4_sibling_marriage", Constraint::C4),
        ("c5_wedding_before_birth", Constraint::C5),
        ("c6_parent_younger", Constraint::C6),
    ];
    for (file, code) in cases {
        let tree =
            load_tree(fixture(&format!("invalid/{file}.tree"))).map_err(|e| e.to_string())?;
        let got: Vec<Constraint> = tree.validate().into_iter().map(|v| v.constraint).collect();
        check(got == [code], format!("{file}: got {got:?}"))?;
        check(
            TraditionalTree::new(tree).is_err(),
            format!("{file} accepted as traditional"),
        )?;
    }
    let valid = load_tree(fixture("smith.tree")).map_err(|e| e.to_string())?;
    check(valid.validate().is_empty(), "smith fixture rejected")?;
    Ok("C2..C6 fixtures rejected with their own code, smith fixture passes, C1 cannot be violated by a finite tree".into())
}

fn grammar() -> Outcome {
    let lex_err = |src: &str| tokenize(src).is_err();
    let parse_err = |src: &str| parse_program(src).is_err();
    check(lex_err("-illegal"), "-illegal accepted")?;
    check(lex_err("'unterminated"), "unterminated string accepted")?;
    check(parse_err("()"), "() accepted")?;
    check(
        parse_err("(+ 2 (define three 3))"),
        "nested define accepted",
    )?;
    for ok in [
        "(lambda () 'Hello, World!')",
        "007",
        "-12",
        "(define long-name 1)",
        "(define very-long-name 1)",
        "(define married? true)",
    ] {
        check(!parse_err(ok), format!("rejected {ok}"))?;
    }
    for kw in KEYWORDS {
        check(
            parse_err(&format!("(define {kw} 1)")),
            format!("define {kw} accepted"),
        )?;
        check(
            parse_err(&format!("(lambda ({kw}) 1)")),
            format!("parameter {kw} accepted"),
        )?;
    }
    Ok(format!(
        "4 rejections, 6 acceptances, {} keywords unshadowable",
        KEYWORDS.len()
    ))
}

fn temporal_table() -> Outcome {
    let dates = [
        "01.09.1939",
        "02.09.1945",
        "15.03.1940",
        "31.12.1999",
        "29.02.2000",
    ];
    let points: Vec<TimePoint> = dates.iter().map(|d| d.parse().unwrap()).collect();
    let key = |t: &TimePoint| (t.year(), t.month(), t.day());
    let mut cases = 0;
    for x in &points {
        for y in &points {
            check(
                before(*x, *y) == (key(x) < key(y)),
                format!("before {x} {y}"),
            )?;
            check(after(*x, *y) == (key(x) > key(y)), format!("after {x} {y}"))?;
            cases += 2;
            let timeline = Timeline::new(*y);
            check(
                timeline.past(*x) == (key(x) < key(y)),
                format!("past {x} now {y}"),
            )?;
            check(
                timeline.future(*x) == (key(x) > key(y)),
                format!("future {x} now {y}"),
            )?;
            cases += 2;
            for z in &points {
                check(
                    during(*x, *y, *z) == (key(y) <= key(x) && key(x) <= key(z)),
                    format!("during {x} {y} {z}"),
                )?;
                cases += 1;
            }
        }
    }
    Ok(format!(
        "{cases} cases over 5 dates (before/after/past/future 25 each, during 125)"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("golden queries", golden_queries),
        ("semantic laws", semantic_laws),
        ("reduction round trip", reduction_round_trip),
        ("greedy vs optimal", greedy_vs_optimal),
        ("shorten scaling", shorten_scaling),
        ("constraint suite", constraint_suite),
        ("grammar conformance", grammar),
        ("temporal truth table", temporal_table),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
