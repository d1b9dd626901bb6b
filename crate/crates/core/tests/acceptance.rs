//! Acceptance suite: one line per criterion, `PASS` or `FAIL`, followed by
//! the figures behind it. Suites 1 to 9 run twice and their logs are
//! compared for the determinism criterion.
//!
//! Soundness of the ordered and purely linear calculi is reported as a
//! failure: the four argument permutations relate pairs of distinct
//! normal forms. The test itself only fails if some other failure shows up.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use lambek_nbe::batch;
use lambek_nbe::gen::{gen_chain, gen_derivation, gen_leaf, gen_nf, gen_trace, GenConfig, SplitMix64};
use lambek_nbe::linear::{canonical_nf, nf_alpha_eq, permute, permute_nf};
use lambek_nbe::names::{Name, Renaming};
use lambek_nbe::nbe::{eval, fresh, reify};
use lambek_nbe::nf::{emb_up, nf_equal};
use lambek_nbe::rewrite::{equiv_oracle, non_equation_witnesses, replay, EquivVerdict};
use lambek_nbe::sem::{run, run_up, t_join, t_map, MonadicValue, Payload};
use lambek_nbe::text::{parse_derivation, print_nf};
use lambek_nbe::{dill, mill, nbe, Formula};

const SUITE: u64 = 1000;
const NODES: usize = 30;

struct Outcome {
    id: u8,
    title: &'static str,
    pass: bool,
    /// Every failing case is one of the known argument-permutation pairs.
    explained: bool,
    detail: String,
    log: String,
}

impl Outcome {
    fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<4} {}: {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.title,
            self.detail
        )
    }
}

fn pct(k: usize, n: usize) -> String {
    format!("{}/{} ({:.1}%)", k, n, 100.0 * k as f64 / n.max(1) as f64)
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn cfg(seed: u64) -> GenConfig {
    GenConfig::new(seed, NODES)
}

fn worked_example() -> Outcome {
    let src = "lett[0] (ax (p*q)) (appr (lett[0] (pair (ax p) (ax q)) \
               (lamr (pair (ax p) (pair (ax q) (ax r))))) (ax r))";
    let golden = "lett[0] (ax (p*q)) (pair (sw (ax p)) (pair (sw (ax q)) (sw (ax r))))";
    let start = Instant::now();
    let out = print_nf(&nbe(&parse_derivation(src).unwrap()).unwrap());
    let took = start.elapsed();
    Outcome {
        id: 1,
        title: "worked example",
        pass: out == golden && took < Duration::from_secs(1),
        explained: false,
        detail: format!("output {} golden, {}", if out == golden { "matches" } else { "differs from" }, secs(took)),
        log: format!("{}\n", out),
    }
}

struct Perturbed {
    same: bool,
    argument_permutation: bool,
    line: String,
}

fn soundness() -> (Outcome, Vec<(u64, lambek_nbe::Derivation)>) {
    let start = Instant::now();
    let cases: Vec<(lambek_nbe::Derivation, Perturbed)> = batch::map_range(0..SUITE, |seed| {
        let c = cfg(seed);
        let t = gen_derivation(&c).unwrap();
        let trace = gen_trace(&c, &t).unwrap();
        let u = replay(&t, &trace).unwrap();
        let (a, b) = (nbe(&t).unwrap(), nbe(&u).unwrap());
        let steps: Vec<String> = trace.iter().map(|s| s.to_string()).collect();
        let p = Perturbed {
            same: nf_equal(&a, &b),
            argument_permutation: trace.iter().any(|s| s.eq.is_argument_permutation()),
            line: format!("{} {} [{}] {}\n", seed, nf_equal(&a, &b), steps.join(" "), print_nf(&a)),
        };
        (t, p)
    });
    let took = start.elapsed();
    let ok = cases.iter().filter(|(_, p)| p.same).count();
    let failures: Vec<&Perturbed> = cases.iter().map(|(_, p)| p).filter(|p| !p.same).collect();
    let explained = failures.iter().filter(|p| p.argument_permutation).count();
    let with = cases.iter().filter(|(_, p)| p.argument_permutation).count();
    let outcome = Outcome {
        id: 2,
        title: "soundness under random steps",
        pass: ok == cases.len() && took < Duration::from_secs(60),
        explained: explained == failures.len(),
        detail: format!(
            "{} equal; {} of {} failures have an argument permutation in the trace ({} traces do); \
             traces without one: {} equal; {}",
            pct(ok, cases.len()),
            explained,
            failures.len(),
            with,
            pct(
                cases.iter().filter(|(_, p)| !p.argument_permutation && p.same).count(),
                cases.len() - with
            ),
            secs(took)
        ),
        log: cases.iter().map(|(_, p)| p.line.as_str()).collect(),
    };
    let population = cases.into_iter().enumerate().map(|(i, (t, _))| (i as u64, t)).collect();
    (outcome, population)
}

fn surjectivity() -> Outcome {
    let rows = batch::map_range(0..SUITE, |seed| {
        let n = gen_nf(&cfg(seed)).unwrap();
        let back = nbe(&emb_up(&n)).unwrap();
        (nf_equal(&back, &n), format!("{} {}\n", seed, print_nf(&n)))
    });
    let ok = rows.iter().filter(|r| r.0).count();
    Outcome {
        id: 3,
        title: "normal forms are fixed",
        pass: ok == rows.len(),
        explained: false,
        detail: pct(ok, rows.len()),
        log: rows.into_iter().map(|r| r.1).collect(),
    }
}

fn idempotence(population: &[(u64, lambek_nbe::Derivation)]) -> Outcome {
    let rows = batch::map(population, |(seed, t)| {
        let n = nbe(t).unwrap();
        let again = nbe(&emb_up(&n)).unwrap();
        (nf_equal(&again, &n), format!("{} {}\n", seed, nf_equal(&again, &n)))
    });
    let ok = rows.iter().filter(|r| r.0).count();
    Outcome {
        id: 4,
        title: "idempotence",
        pass: ok == rows.len(),
        explained: false,
        detail: pct(ok, rows.len()),
        log: rows.into_iter().map(|r| r.1).collect(),
    }
}

fn non_identification() -> Outcome {
    let mut log = String::new();
    let mut distinct = 0;
    let mut unknown = 0;
    let pairs = non_equation_witnesses();
    for (t, u) in &pairs {
        let (a, b) = (nbe(t).unwrap(), nbe(u).unwrap());
        let verdict = equiv_oracle(t, u, 40, 6).unwrap();
        distinct += usize::from(!nf_equal(&a, &b));
        unknown += usize::from(verdict == EquivVerdict::Unknown);
        writeln!(log, "{} | {} | {:?}", print_nf(&a), print_nf(&b), verdict).unwrap();
    }
    Outcome {
        id: 5,
        title: "non-equations stay apart",
        pass: distinct == pairs.len() && unknown == pairs.len(),
        explained: false,
        detail: format!("{} pairs distinct, {} unknown at (40, 6)", pct(distinct, pairs.len()), unknown),
        log,
    }
}

fn oracle_agreement(population: &[(u64, lambek_nbe::Derivation)]) -> Outcome {
    let start = Instant::now();
    let rows = batch::map(&population[..300], |(seed, t)| {
        let target = emb_up(&nbe(t).unwrap());
        match equiv_oracle(t, &target, 40, 8).unwrap() {
            EquivVerdict::Related(trace) => {
                let ok = replay(t, &trace).map(|r| r == target).unwrap_or(false);
                (Some(ok), format!("{} related {} {}\n", seed, trace.len(), ok))
            }
            EquivVerdict::Unknown => (None, format!("{} unknown\n", seed)),
        }
    });
    let related = rows.iter().filter(|r| r.0.is_some()).count();
    let replayed = rows.iter().filter(|r| r.0 == Some(true)).count();
    Outcome {
        id: 6,
        title: "oracle traces replay",
        pass: replayed == related,
        explained: false,
        detail: format!(
            "{} related traces replay; related rate {}; {}",
            pct(replayed, related),
            pct(related, rows.len()),
            secs(start.elapsed())
        ),
        log: rows.into_iter().map(|r| r.1).collect(),
    }
}

fn monad_laws() -> Outcome {
    let atoms: Vec<Formula> = ["p", "q", "r"].iter().map(|a| Formula::atom(a)).collect();
    let rows = batch::map_range(0..5000, |seed| {
        let mut rng = SplitMix64::new(seed);
        let (cxt, nf, f) = gen_leaf(&mut rng, &atoms);
        let m = gen_chain(&mut rng, &atoms, &cxt, Payload::Nf(nf.clone()), 5);
        let wrap = |mv: &MonadicValue| MonadicValue::eta(mv.cxt(), Payload::Monadic(Box::new(mv.clone())));
        let left_unit = t_join(&wrap(&m)).unwrap() == m;
        let etas = t_map(&m, &mut |c, p| Ok(Payload::Monadic(Box::new(MonadicValue::eta(c.clone(), p))))).unwrap();
        let right_unit = t_join(&etas).unwrap() == m;
        let m2 = gen_chain(&mut rng, &atoms, &m.cxt(), Payload::Monadic(Box::new(m.clone())), 5);
        let m3 = gen_chain(&mut rng, &atoms, &m2.cxt(), Payload::Monadic(Box::new(m2.clone())), 5);
        let outer = t_join(&t_join(&m3).unwrap()).unwrap();
        let inner = t_join(
            &t_map(&m3, &mut |_, p| match p {
                Payload::Monadic(x) => Ok(Payload::Monadic(Box::new(t_join(&x)?))),
                _ => unreachable!("chains built over chains"),
            })
            .unwrap(),
        )
        .unwrap();
        let assoc = outer == inner;
        let v = eval(&emb_up(&nf), fresh(&cxt)).unwrap();
        let ran = run(&f, &MonadicValue::eta(cxt.clone(), Payload::Value(v.clone()))).unwrap();
        let run_eta = reify(&f, &ran).unwrap() == reify(&f, &v).unwrap();
        let valued = t_map(&m, &mut |c, p| match p {
            Payload::Nf(n) => Ok(Payload::Value(eval(&emb_up(&n), fresh(c))?)),
            _ => unreachable!("leaf payload"),
        })
        .unwrap();
        let algebra = reify(&f, &run(&f, &valued).unwrap()).unwrap() == run_up(&m, &f).unwrap();
        let all = [left_unit, right_unit, assoc, run_eta, algebra];
        let bits: String = all.iter().map(|b| if *b { '1' } else { '0' }).collect();
        (all, format!("{} {} {} {}\n", seed, m.chain_len(), m3.chain_len(), bits))
    });
    let names = ["left unit", "right unit", "associativity", "run after unit", "run after reify"];
    let counts: Vec<usize> = (0..5).map(|i| rows.iter().filter(|r| r.0[i]).count()).collect();
    Outcome {
        id: 7,
        title: "monad and algebra laws",
        pass: counts.iter().all(|&k| k == rows.len()),
        explained: false,
        detail: names.iter().zip(&counts).map(|(n, k)| format!("{} {}", n, pct(*k, rows.len()))).collect::<Vec<_>>().join(", "),
        log: rows.into_iter().map(|r| r.1).collect(),
    }
}

fn mill_suites() -> Outcome {
    let start = Instant::now();
    struct Row {
        sound: bool,
        argument_permutation: bool,
        idempotent: bool,
        fixed: bool,
        exchange: bool,
        line: String,
    }
    let rows: Vec<Row> = batch::map_range(0..SUITE, |seed| {
        let c = cfg(seed);
        let t = mill::gen_term(&c).unwrap();
        let trace = mill::gen_trace(&c, &t).unwrap();
        let u = mill::replay(&t, &trace).unwrap();
        let n = mill::nbe(&t).unwrap();
        let sound = mill::nbe(&u).unwrap() == n;
        let idempotent = mill::nbe(&mill::emb(&n)).unwrap() == n;
        let g = mill::gen_nf(&c).unwrap();
        let fixed = nf_alpha_eq(&mill::nbe(&mill::emb(&g)).unwrap(), &g);
        // Exchange: the context listed in another order, and the hypotheses
        // renamed so that their sorted order changes too.
        let seq = mill::typecheck(&t).unwrap();
        let mut rng = SplitMix64::new(seed);
        let mut shuffled = seq.lin.clone();
        rng.shuffle(&mut shuffled);
        let listed = mill::nbe_in(&shuffled, &t).unwrap() == n;
        let mut targets: Vec<Name> = seq.lin.iter().map(|(x, _)| x.clone()).collect();
        rng.shuffle(&mut targets);
        let p = Renaming::new(seq.lin.iter().map(|(x, _)| x.clone()).zip(targets)).unwrap().complete();
        let renamed = mill::nbe(&permute(&p, &t)).unwrap();
        let exchange = listed && nf_alpha_eq(&renamed, &canonical_nf(&permute_nf(&p, &n)));
        let steps: Vec<String> = trace.iter().map(|s| s.to_string()).collect();
        Row {
            sound,
            argument_permutation: trace.iter().any(|s| s.rule.is_argument_permutation()),
            idempotent,
            fixed,
            exchange,
            line: format!(
                "{} {} {} {} {} [{}] {}\n",
                seed,
                sound,
                idempotent,
                fixed,
                exchange,
                steps.join(" "),
                mill::print_nf(&n)
            ),
        }
    });
    let n = rows.len();
    let count = |f: &dyn Fn(&Row) -> bool| rows.iter().filter(|r| f(r)).count();
    let sound = count(&|r| r.sound);
    let unexplained = count(&|r| !r.sound && !r.argument_permutation);
    let others = [count(&|r| r.fixed), count(&|r| r.idempotent), count(&|r| r.exchange)];
    Outcome {
        id: 8,
        title: "MILL suites",
        pass: sound == n && others.iter().all(|&k| k == n),
        explained: unexplained == 0 && others.iter().all(|&k| k == n),
        detail: format!(
            "soundness {} ({} failures without an argument permutation), surjectivity {}, \
             idempotence {}, exchange {}; {}",
            pct(sound, n),
            unexplained,
            pct(others[0], n),
            pct(others[1], n),
            pct(others[2], n),
            secs(start.elapsed())
        ),
        log: rows.into_iter().map(|r| r.line).collect(),
    }
}

fn dill_suites() -> Outcome {
    let start = Instant::now();
    let rows = batch::map_range(0..SUITE, |seed| {
        let c = cfg(seed);
        let t = dill::gen_term(&c).unwrap();
        let before = dill::typecheck(&t).unwrap();
        let n = dill::nbe(&t).unwrap();
        let after = dill::typecheck_nf(&n).unwrap();
        let preserved = after.lin == before.lin
            && after.succ == before.succ
            && after.int.iter().all(|e| before.int.contains(e));
        let g = dill::gen_nf(&c).unwrap();
        let fixed = nf_alpha_eq(&dill::nbe(&dill::emb(&g)).unwrap(), &g);
        (preserved, fixed, format!("{} {} {} {}\n", seed, preserved, fixed, dill::print_nf(&n)))
    });
    let natural = batch::map_range(0..200, |seed| {
        let t = dill::gen_term(&cfg(SUITE + seed)).unwrap();
        let seq = dill::typecheck(&t).unwrap();
        let mut rng = SplitMix64::new(seed);
        let mut targets: Vec<Name> = (0..seq.int.len() + 2).map(|i| Name::new(&format!("k{}", i))).collect();
        rng.shuffle(&mut targets);
        let r = Renaming::new(seq.int.iter().map(|(x, _)| x.clone()).zip(targets)).unwrap();
        let left = dill::nbe(&dill::rename(&r, &t).unwrap()).unwrap();
        let right = dill::rename_nf(&r, &dill::nbe(&t).unwrap()).unwrap();
        (left == right, format!("{} {} {}\n", seed, seq.int.len(), left == right))
    });
    let bang = dill::print_nf(&dill::nbe(&dill::parse_term("ax y:!p").unwrap()).unwrap());
    let golden = bang == "letb[x0] (ax y:!p) (bang (sw (axint x0:p)))";
    let n = rows.len();
    let preserved = rows.iter().filter(|r| r.0).count();
    let fixed = rows.iter().filter(|r| r.1).count();
    let nat = natural.iter().filter(|r| r.0).count();
    let mut log: String = rows.into_iter().map(|r| r.2).collect();
    log.extend(natural.into_iter().map(|r| r.1));
    log.push_str(&bang);
    Outcome {
        id: 9,
        title: "DILL suites",
        pass: preserved == n && fixed == n && nat == 200 && golden,
        explained: false,
        detail: format!(
            "preservation {}, surjectivity {}, `!p` hypothesis {}, renaming naturality {}; {}",
            pct(preserved, n),
            pct(fixed, n),
            if golden { "matches" } else { "differs" },
            pct(nat, 200),
            secs(start.elapsed())
        ),
        log,
    }
}

fn suites() -> Vec<Outcome> {
    let (sound, population) = soundness();
    vec![
        worked_example(),
        sound,
        surjectivity(),
        idempotence(&population),
        non_identification(),
        oracle_agreement(&population),
        monad_laws(),
        mill_suites(),
        dill_suites(),
    ]
}

fn main() {
    let first = suites();
    let second = suites();
    let differing: Vec<u8> = first.iter().zip(&second).filter(|(a, b)| a.log != b.log).map(|(a, _)| a.id).collect();
    let bytes: usize = first.iter().map(|o| o.log.len()).sum();
    let mut all = first;
    all.push(Outcome {
        id: 10,
        title: "determinism",
        pass: differing.is_empty(),
        explained: false,
        detail: format!("second run of suites 1-9, {} log bytes, differing suites {:?}", bytes, differing),
        log: String::new(),
    });
    for o in &all {
        println!("{}", o.line());
    }
    let unexplained: Vec<u8> = all.iter().filter(|o| !o.pass && !o.explained).map(|o| o.id).collect();
    if !unexplained.is_empty() {
        eprintln!("criteria failing for unexpected reasons: {:?}", unexplained);
        std::process::exit(1);
    }
}
