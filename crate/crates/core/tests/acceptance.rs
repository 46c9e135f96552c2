//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use common::SyntaxGen;
use mrx::cli::{self, EntryKind, Format};
use mrx::harness::{self, PropGenerator, SoundnessConfig};
use mrx::kernel::enumerate::{check_value, check_value_bounded, enumerate};
use mrx::kernel::syntax::{Binders, Term, Ty};
use mrx::kernel::{eval, Env, Evaluator, Value};
use mrx::logic::{
    ae_extract, choice_realiser, extract_checked, induction_realiser, trivial_assumption, Checker,
    ExtractionResult, DEFAULT_NAT_BOUND,
};
use mrx::prop::{cr, tp, Prop};
use mrx::realisability::{decide_inhabited, mr_type_for, Variant};
use mrx::surface::{
    parse, parse_program, parse_proof, parse_prop, parse_term, print_program, print_proof,
    print_prop, print_term,
};

type Criterion = fn() -> Result<String, String>;

/// Search bound for `Nat` components well above the values at `x ≤ 10`.
const SEARCH: u64 = 64;

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("fibonacci extraction", fibonacci_extraction),
        ("memoised step counts", memoised_step_counts),
        ("soundness over generated propositions", soundness_sweep),
        ("rule soundness", rule_soundness),
        ("element totality", element_totality),
        ("choice and induction lemmas", choice_and_induction),
        ("forall-exists programs", forall_exists_programs),
        ("round trips and determinism", round_trips_and_determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} [{ms} ms]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {}: {name}: {detail} [{ms} ms]", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn naive_fib(n: u64) -> u64 {
    if n < 2 {
        n
    } else {
        naive_fib(n - 1) + naive_fib(n - 2)
    }
}

fn nat_of(v: &Value) -> Result<u64, String> {
    v.as_nat()
        .ok_or_else(|| format!("expected a numeral, got {v:?}"))
}

/// Extract `fib.rsp` into a fresh artifact and return it with its path.
fn fib_artifact(dir: &Path) -> Result<(PathBuf, cli::Artifact), String> {
    let out = dir.join("fib.rsx");
    let run = cli::cmd_extract(
        &data("fib.rsp"),
        Variant::Mr,
        DEFAULT_NAT_BOUND,
        &out,
        Format::Text,
    );
    ensure(run.code == cli::EXIT_OK, || {
        format!("extract exited {}: {}", run.code, run.stderr)
    })?;
    let art = cli::load_artifact(&out)?;
    Ok((out, art))
}

fn fibonacci_extraction() -> Result<String, String> {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (path, art) = fib_artifact(dir.path())?;
    let entry = art
        .lookup("fib")
        .ok_or("no program `fib` in the artifact")?;
    ensure(entry.kind == EntryKind::Program, || {
        format!("`fib` is a {:?}", entry.kind)
    })?;
    let program = parse_term(&entry.program).map_err(|e| e.to_string())?;
    ensure(program.count_rec() == 1, || {
        format!("{} rec nodes", program.count_rec())
    })?;

    let mut motives = Vec::new();
    program.visit(&mut |t| {
        if let Term::Rec { motive, .. } = t {
            motives.push((**motive).clone());
        }
    });
    let expected = Ty::prod(Ty::Nat, Ty::prod(Ty::Nat, Ty::Unit));
    let motive = motives[0]
        .strengthen()
        .ok_or("the motive depends on the recursion index")?;
    ensure(motive.simplify() == expected, || {
        format!("motive is {motive:?}")
    })?;

    for n in 0..=30 {
        let out = cli::cmd_run(&path, "fib", &[n.to_string()], Format::Text);
        ensure(out.code == cli::EXIT_OK, || {
            format!("run {n} exited {}", out.code)
        })?;
        let got: u64 = out
            .stdout
            .lines()
            .next()
            .unwrap_or("")
            .parse()
            .map_err(|_| out.stdout.clone())?;
        ensure(got == naive_fib(n), || {
            format!("fib({n}) = {got}, expected {}", naive_fib(n))
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "one rec with motive Nat × (Nat × Unit), fib(n) exact for n ≤ 30 in {} ms",
        elapsed.as_millis()
    ))
}

fn memoised_step_counts() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (_, art) = fib_artifact(dir.path())?;
    let steps = |name: &str, n: u64| -> Result<u64, String> {
        let entry = art
            .lookup(name)
            .ok_or_else(|| format!("no entry `{name}`"))?;
        let (v, steps) = cli::run_entry(entry, &[Term::Nat(n)])?;
        ensure(nat_of(&v)? == naive_fib(n), || {
            format!("{name}({n}) is wrong")
        })?;
        Ok(steps)
    };
    let points = [5u64, 10, 20, 40];
    let counts: Vec<u64> = points
        .iter()
        .map(|&n| steps("fib", n))
        .collect::<Result<_, _>>()?;
    let slope = (counts[1] - counts[0]) as f64 / 5.0;
    let intercept = counts[0] as f64 - 5.0 * slope;
    for (&n, &s) in points.iter().zip(&counts) {
        ensure(s as f64 <= slope * n as f64 + intercept + 1.0, || {
            format!("steps {counts:?} at {points:?} are not linear")
        })?;
    }
    let naive = steps("naive-fib", 25)?;
    let memo = steps("fib", 25)?;
    ensure(naive > 10 * memo, || {
        format!("naive {naive} vs memoised {memo} at 25")
    })?;
    Ok(format!(
        "steps {counts:?} at n = {points:?} fit {slope}·n + {intercept}; at 25 naive {naive} vs {memo}"
    ))
}

fn soundness_sweep() -> Result<String, String> {
    let mut parts = Vec::new();
    for variant in [Variant::Mr, Variant::MrPrime] {
        let cfg = SoundnessConfig {
            variant,
            ..SoundnessConfig::default()
        };
        let start = Instant::now();
        let report = harness::soundness(&cfg);
        let elapsed = start.elapsed();
        ensure(report.propositions >= 500, || {
            format!("only {} propositions", report.propositions)
        })?;
        ensure(report.violations == 0, || {
            let first = report
                .counterexamples
                .first()
                .map(|c| c.script())
                .unwrap_or_default();
            format!(
                "{} violations under {}; first:\n{first}",
                report.violations,
                variant.as_str()
            )
        })?;
        ensure(report.element_failures == 0, || "element failures".into())?;
        ensure(elapsed < Duration::from_secs(60), || {
            format!("took {elapsed:?}")
        })?;
        parts.push(format!(
            "{}: {} propositions ({} over the realiser cap), {} realisers, {} realised, 0 violations",
            variant.as_str(),
            report.propositions,
            report.skipped,
            report.realisers,
            report.realised
        ));
    }
    Ok(parts.join("; "))
}

fn rule_soundness() -> Result<String, String> {
    let outcomes = harness::rule_soundness(DEFAULT_NAT_BOUND);
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed).collect();
    ensure(failed.is_empty(), || {
        let f = failed[0];
        format!(
            "{} failures; {} #{} ({}): {}",
            failed.len(),
            f.rule,
            f.instance,
            f.variant.as_str(),
            f.detail
        )
    })?;
    let mut per_rule: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for o in &outcomes {
        *per_rule
            .entry((o.rule.as_str(), o.variant.as_str()))
            .or_default() += 1;
    }
    let rules: std::collections::BTreeSet<&str> = per_rule.keys().map(|(r, _)| *r).collect();
    ensure(rules.len() >= 17 && rules.contains("full-absurd"), || {
        format!("rules covered: {rules:?}")
    })?;
    let thin: Vec<_> = per_rule.iter().filter(|(_, &n)| n < 3).collect();
    ensure(thin.is_empty(), || {
        format!("fewer than three instances: {thin:?}")
    })?;
    Ok(format!(
        "{} rules, {} checked instances, 0 failures",
        rules.len(),
        outcomes.len()
    ))
}

fn element_totality() -> Result<String, String> {
    let mut props = PropGenerator::new(3, 3, 2).distinct(600);
    props.push(Prop::exists(Ty::Empty, Prop::atom(Ty::Unit)));
    props.push(Prop::exists(
        Ty::Empty,
        Prop::exists(Ty::Empty, Prop::Absurd),
    ));
    props.push(Prop::forall(
        Ty::Unit,
        Prop::exists(Ty::Empty, Prop::atom(Ty::Empty)),
    ));
    let over_empty = props
        .iter()
        .filter(|p| print_prop(p).contains("(exists empty"))
        .count();
    ensure(props.len() >= 500 && over_empty > 0, || {
        format!("{} propositions", props.len())
    })?;
    let failures = harness::element_totality(&props);
    ensure(failures.is_empty(), || {
        format!("element fails at {}", print_prop(&failures[0]))
    })?;
    let empty = enumerate(
        &cr(&Prop::exists(Ty::Empty, Prop::atom(Ty::Unit))),
        DEFAULT_NAT_BOUND,
    )
    .map_err(|e| e.to_string())?;
    ensure(empty.values.is_empty() && !empty.partial, || {
        "Cr(∃x:Empty. Unit) is inhabited".into()
    })?;
    Ok(format!(
        "{} propositions ({over_empty} with ∃ over Empty) all have element in Cr'; Cr(∃x:Empty. Unit) is empty",
        props.len()
    ))
}

/// Check an extraction at one realiser of its antecedent. Returns whether
/// the realiser realises the antecedent.
fn transfers(res: &ExtractionResult, r: &Value, bound: u64) -> Result<bool, String> {
    let ante = &res.sequent.antecedent;
    let ty = mr_type_for(ante, r, res.variant).map_err(|e| e.to_string())?;
    let Some(w) = decide_inhabited(&ty, bound).map_err(|e| e.to_string())? else {
        return Ok(false);
    };
    let mut ev = Evaluator::new();
    let out = ev
        .apply(&res.realiser, r.clone())
        .map_err(|e| e.to_string())?;
    let out_ty =
        mr_type_for(&res.sequent.succedent, &out, res.variant).map_err(|e| e.to_string())?;
    let builder = res
        .witness_builder
        .snd()
        .ok_or("witness builder is not a pair")?;
    let w_out = ev
        .apply2(builder, r.clone(), w)
        .map_err(|e| e.to_string())?;
    ensure(
        check_value_bounded(&w_out, &out_ty, Some(bound)).valid,
        || format!("witness fails for realiser {r:?}"),
    )?;
    Ok(true)
}

fn fin_eq(index: usize, lit: u32) -> Prop {
    Prop::holds(Term::eq(Term::Var(index), Term::Fin(lit)))
}

fn choice_and_induction() -> Result<String, String> {
    let (mut realisers, mut realised, mut inl_cases) = (0usize, 0usize, 0usize);
    for a in 1..=3u32 {
        for b in 1..=3u32 {
            let families = [
                fin_eq(0, b - 1),
                Prop::or(fin_eq(1, 0), fin_eq(0, 0)),
                Prop::implies(fin_eq(1, a - 1), fin_eq(0, b - 1)),
            ];
            for family in &families {
                for variant in [Variant::Mr, Variant::MrPrime] {
                    let default = Value::Fin(0);
                    let b0 = (variant == Variant::MrPrime).then_some(&default);
                    let res = choice_realiser(&Ty::Fin(a), &Ty::Fin(b), family, b0, variant)
                        .map_err(|e| e.to_string())?;
                    let crude = variant.crude(&res.sequent.antecedent);
                    let all = enumerate(&crude, DEFAULT_NAT_BOUND).map_err(|e| e.to_string())?;
                    ensure(!all.partial, || "antecedent realisers truncated".into())?;
                    for r in &all.values {
                        realisers += 1;
                        if transfers(&res, r, DEFAULT_NAT_BOUND)? {
                            realised += 1;
                        }
                        let mut ev = Evaluator::new();
                        for x in 0..a {
                            let rx = ev.apply(r, Value::Fin(x)).map_err(|e| e.to_string())?;
                            if matches!(rx, Value::Inl(_)) {
                                inl_cases += 1;
                                break;
                            }
                        }
                    }
                }
            }
        }
    }
    ensure(inl_cases > 0, || "no realiser with r(x) = inl".into())?;

    let families = [
        (
            "(exists nat (lam y (atom (holds (= y (+ x x))))))",
            [
                ("<zero; e>", "λx.λp.<p.1 + 2; e>"),
                (
                    "inr <zero; e>",
                    "λx.λp.case p of {inl q -> inl e; inr q -> inr <q.1 + 2; e>}",
                ),
            ],
        ),
        (
            "(and (exists nat (lam y (atom (holds (= y (succ x)))))) (atom unit))",
            [
                ("<<1; e>; e>", "λx.λp.<<p.1.1 + 1; e>; e>"),
                (
                    "<inr <1; e>; e>",
                    "λx.λp.<case p.1 of {inl q -> inl e; inr q -> inr <q.1 + 1; e>}; e>",
                ),
            ],
        ),
    ];
    let mut points = 0;
    for (body, realisers_by_variant) in families {
        let Prop::Forall(_, family) =
            parse_prop(&format!("(forall nat (lam x {body}))")).map_err(|e| e.to_string())?
        else {
            return Err("family did not parse as a quantifier".into());
        };
        for (variant, (base, step)) in [Variant::Mr, Variant::MrPrime]
            .into_iter()
            .zip(realisers_by_variant)
        {
            let res = induction_realiser(&family, variant).map_err(|e| e.to_string())?;
            let base = parse_program(base).map_err(|e| e.to_string())?;
            let step = parse_program(step).map_err(|e| e.to_string())?;
            let r = eval(&Term::pair(base, step), &Env::new()).map_err(|e| e.to_string())?;
            let Prop::And(p0, hyp) = &res.sequent.antecedent else {
                return Err("unexpected induction antecedent".into());
            };
            let Prop::Forall(_, hyp) = &**hyp else {
                return Err("unexpected induction hypothesis".into());
            };
            let mut ev = Evaluator::new();
            let realises = |p: &Prop, v: &Value| -> Result<bool, String> {
                let ty = mr_type_for(p, v, variant).map_err(|e| e.to_string())?;
                Ok(decide_inhabited(&ty, SEARCH)
                    .map_err(|e| e.to_string())?
                    .is_some())
            };
            let (b, s) = (r.fst().ok_or("base")?, r.snd().ok_or("step")?);
            ensure(realises(p0, b)?, || {
                format!("{body}: base realiser is wrong")
            })?;
            let f = ev
                .apply(&res.realiser, r.clone())
                .map_err(|e| e.to_string())?;
            for x in 0..=10 {
                let sx = ev.apply(s, Value::Nat(x)).map_err(|e| e.to_string())?;
                ensure(realises(&hyp.instantiate(&Term::Nat(x)), &sx)?, || {
                    format!("{body}: step realiser is wrong at {x}")
                })?;
                let fx = ev.apply(&f, Value::Nat(x)).map_err(|e| e.to_string())?;
                let px = family.instantiate(&Term::Nat(x));
                ensure(realises(&px, &fx)?, || {
                    format!("value at {x} does not realise {}", print_prop(&px))
                })?;
                points += 1;
            }
        }
    }
    Ok(format!(
        "choice: {realisers} antecedent realisers over Fin 1..3, {realised} realised, {inl_cases} with r(x) = inl; \
         induction: {points} points at x ≤ 10"
    ))
}

/// Extract every `∀∃` goal of a source file and check its program at
/// every enumerable point. Returns the number of points.
fn check_goals(
    file: &mrx::surface::SourceFile,
    variant: Variant,
    bound: u64,
) -> Result<(usize, usize), String> {
    let (mut goals, mut points) = (0, 0);
    for (goal, proof_name, assume, _) in file.extractions() {
        let res = extract_checked(&file.defs.proofs[proof_name], variant, &Checker::new(bound))
            .map_err(|e| format!("{goal}: {e}"))?;
        let truth = match assume {
            Some(t) => eval(t, &Env::new()).map_err(|e| e.to_string())?,
            None => decide_inhabited(&tp(&res.sequent.antecedent), bound)
                .map_err(|e| e.to_string())?
                .ok_or_else(|| format!("{goal}: the antecedent is false"))?,
        };
        let assumption = trivial_assumption(&res.sequent.antecedent, &truth, variant)
            .map_err(|e| e.to_string())?;
        let ae = ae_extract(&res, &assumption, bound).map_err(|e| format!("{goal}: {e}"))?;
        ensure(!ae.points.is_empty() && ae.all_valid(), || {
            format!("{goal} ({})", variant.as_str())
        })?;
        for p in &ae.points {
            let at = ae
                .family
                .instantiate_value(&p.output)
                .instantiate_value(&p.input);
            ensure(check_value(&p.truth, &tp(&at)), || {
                format!("{goal}: truth at {:?}", p.input)
            })?;
        }
        goals += 1;
        points += ae.points.len();
    }
    Ok((goals, points))
}

fn forall_exists_programs() -> Result<String, String> {
    let bound = DEFAULT_NAT_BOUND;
    let text = std::fs::read_to_string(data("goals.rsp")).map_err(|e| e.to_string())?;
    let file = parse(&text).map_err(|e| e.to_string())?;
    let (mut goals, mut points) = (0, 0);
    for variant in [Variant::Mr, Variant::MrPrime] {
        let (g, p) = check_goals(&file, variant, bound)?;
        goals += g;
        points += p;
    }
    ensure(goals >= 6, || format!("only {goals} goals"))?;

    let text = std::fs::read_to_string(data("fib.rsp")).map_err(|e| e.to_string())?;
    let file = parse(&text).map_err(|e| e.to_string())?;
    let (_, proof_name, assume, _) = file
        .extractions()
        .next()
        .ok_or("no extraction in fib.rsp")?;
    let proof = &file.defs.proofs[proof_name];
    let fib_bound = 20;
    let res =
        extract_checked(proof, Variant::Mr, &Checker::new(fib_bound)).map_err(|e| e.to_string())?;
    let truth = eval(assume.ok_or("no assumption")?, &Env::new()).map_err(|e| e.to_string())?;
    let assumption = trivial_assumption(&res.sequent.antecedent, &truth, Variant::Mr)
        .map_err(|e| e.to_string())?;
    let ae = ae_extract(&res, &assumption, fib_bound).map_err(|e| e.to_string())?;
    ensure(ae.points.len() == 21, || {
        format!("{} points", ae.points.len())
    })?;
    for p in &ae.points {
        let n = nat_of(&p.input)?;
        let k = nat_of(&p.output)?;
        ensure(p.valid && k == naive_fib(n), || {
            format!("G({n}, {k}) fails")
        })?;
        ensure(
            check_value(
                &p.truth,
                &tp(&ae
                    .family
                    .instantiate_value(&p.output)
                    .instantiate_value(&p.input)),
            ),
            || format!("truth at {n} is not an element"),
        )?;
    }
    Ok(format!(
        "{goals} goal extractions with {points} points valid; fibonacci G(n, fib n) for n ≤ {fib_bound}"
    ))
}

fn round_trips_and_determinism() -> Result<String, String> {
    let mut g = SyntaxGen::new(2024);
    for i in 0..1000 {
        let depth = i % 7;
        let p = g.prop(depth, 0);
        let text = print_prop(&p);
        ensure(parse_prop(&text).ok() == Some(p), || format!("prop {text}"))?;
        let q = g.proof(depth, 0);
        let text = print_proof(&q);
        ensure(parse_proof(&text).ok() == Some(q), || {
            format!("proof {text}")
        })?;
        let t = g.program(depth);
        let listing = print_program(&t);
        ensure(parse_program(&listing).ok().as_ref() == Some(&t), || {
            format!("program {listing}")
        })?;
        let sexp = print_term(&t);
        ensure(parse_term(&sexp).ok() == Some(t), || format!("term {sexp}"))?;
    }

    let cfg = SoundnessConfig {
        seed: 17,
        propositions: 200,
        ..SoundnessConfig::default()
    };
    let first = harness::soundness(&cfg).to_json();
    let second = harness::soundness(&cfg).to_json();
    ensure(first == second, || {
        "soundness reports differ for one seed".into()
    })?;
    let args = [
        "mrx",
        "--format",
        "json",
        "soundness",
        "--seed",
        "17",
        "--propositions",
        "100",
    ];
    let a = cli::run_args(args);
    let b = cli::run_args(args);
    ensure(
        a.code == 0 && a.stdout == b.stdout && !a.stdout.is_empty(),
        || format!("cli soundness output differs or failed ({})", a.code),
    )?;
    Ok(format!(
        "1000 props, proofs and programs round trip; reports byte-identical ({} bytes)",
        first.len()
    ))
}
