//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bohm::ccc::{check_axioms_with, collapse, parse_arrow, replay, to_lambda, ArrowTerm};
use bohm::models::{define_functional, distinguish, i_defines_check, kappa, prime_power_code, Functional, PModel};
use bohm::normalize::{decide_eq, Normalizer};
use bohm::numerals::{church, combinator, CombinatorKind, Tag};
use bohm::products::{
    build_iso, measure, product_normal_form, replace_at, separate_prod, subtype_at, type_nf_with, verify_product,
    DecreaseTier, Measure, RedexOrder,
};
use bohm::random::{random_arrow, random_pure_pair, random_type};
use bohm::separator::{separate_two, verify, verify_stages, SeparationCertificate};
use bohm::syntax::{numeral_type, parse_type, read_term, Context, Term, Ty, TyKind};

const COMBINATOR_SUITE_LIMIT: Duration = Duration::from_secs(60);
const EXAMPLE_LIMIT: Duration = Duration::from_secs(300);
const TYPE_NF_LIMIT: Duration = Duration::from_millis(10);
const TYPE_NF_SAMPLES: usize = 1000;
const TYPE_NF_MAX_NODES: usize = 30;
const ISO_SAMPLES: usize = 50;
const AXIOM_INSTANCES: usize = 20;
const COMPOSITES: usize = 200;
const ORACLE_PAIRS: usize = 200;
const ORACLE_DEPTH: u32 = 3;
const ORACLE_BASE: u32 = 3;

const EXAMPLE_A: &str = "\\x:(p->p)->p. x (\\y:p. x (\\z:p. y))";
const EXAMPLE_B: &str = "\\x:(p->p)->p. x (\\y:p. x (\\z:p. z))";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn term(s: &str) -> Term {
    read_term(s, &Context::new()).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn open_term(s: &str, vars: &[(&str, &str)]) -> Term {
    let mut ctx = Context::new();
    for (n, t) in vars {
        ctx.push(n, parse_type(t).unwrap()).unwrap();
    }
    read_term(s, &ctx).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn ap(f: &Term, args: &[Term]) -> Term {
    Term::apps(f.clone(), args).expect("well-typed application")
}

fn k(tag: Tag, i: usize) -> Term {
    combinator(CombinatorKind::new(tag, i)).expect("side conditions hold")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn combinator_suite() -> Outcome {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut failures = Vec::new();
    let mut check = |name: String, lhs: Term, rhs: Term| {
        checked += 1;
        match decide_eq(&lhs, &rhs) {
            Ok(true) => {}
            Ok(false) => failures.push(name),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    };
    for i in 0..=4usize {
        let a = Term::free("a", numeral_type(i));
        let b = Term::free("b", numeral_type(i));
        for n in 0..=3u64 {
            let want = if n == 0 { a.clone() } else { b.clone() };
            check(format!("C_{i} [{n}] a b"), ap(&k(Tag::Cond, i), &[church(n, i), a.clone(), b.clone()]), want);
            check(format!("R_{i} [{n}]"), ap(&k(Tag::Lower, i), &[church(n, i + 1)]), church(n, i));
            for m in 0..=3u64 {
                check(
                    format!("E_{i} [{n}] [{m}]"),
                    ap(&k(Tag::Expo, i), &[church(n, i + 1), church(m, i + 1)]),
                    church(m.pow(n as u32), i),
                );
                check(
                    format!("S_{i} [{n}] [{m}]"),
                    ap(&k(Tag::Add, i), &[church(n, i), church(m, i)]),
                    church(n + m, i),
                );
                check(
                    format!("M_{i} [{n}] [{m}]"),
                    ap(&k(Tag::Mul, i), &[church(n, i), church(m, i)]),
                    church(n * m, i),
                );
                let pair = ap(&k(Tag::Pair, i), &[church(n, i), church(m, i)]);
                check(
                    format!("pi1_{i} (Pi_{i} [{n}] [{m}])"),
                    ap(&k(Tag::Proj1, i), std::slice::from_ref(&pair)),
                    church(n, i),
                );
                check(format!("pi2_{i} (Pi_{i} [{n}] [{m}])"), ap(&k(Tag::Proj2, i), &[pair]), church(m, i));
            }
            if i <= 1 {
                check(
                    format!("P_{i} [{n}]"),
                    ap(&k(Tag::Pred, i), &[church(n, i + 3)]),
                    church(n.saturating_sub(1), i),
                );
            }
            if n <= 1 && i >= 1 {
                check(format!("Z_{i} [{n}]"), ap(&k(Tag::Raise, i), &[church(n, i - 1)]), church(n, i));
            }
            for kk in 0..=1usize {
                if kk == 0 || i >= 3 * kk {
                    let want = if n == kk as u64 { 0 } else { 1 };
                    check(format!("D^{kk}_{i} [{n}]"), ap(&k(Tag::Check(kk), i), &[church(n, i)]), church(want, i));
                }
            }
        }
        let pair = ap(&k(Tag::Pair, i), &[a.clone(), b.clone()]);
        check(format!("pi1_{i} (Pi_{i} a b)"), ap(&k(Tag::Proj1, i), std::slice::from_ref(&pair)), a.clone());
        check(format!("pi2_{i} (Pi_{i} a b)"), ap(&k(Tag::Proj2, i), &[pair]), b.clone());
    }
    let elapsed = start.elapsed();
    ensure(failures.is_empty(), || format!("{} of {checked} failed: {}", failures.len(), failures.join(", ")))?;
    ensure(elapsed < COMBINATOR_SUITE_LIMIT, || format!("{checked} equalities took {elapsed:.1?}"))?;
    Ok(format!("{checked} equalities in {elapsed:.1?}"))
}

fn unary(m: PModel, table: [u32; 2]) -> Functional {
    let ty = parse_type("p->p").unwrap();
    Functional::from_table(m, ty, &[m.ordinal(table[0]).unwrap(), m.ordinal(table[1]).unwrap()]).unwrap()
}

fn worked_example() -> Outcome {
    let start = Instant::now();
    let (a, b) = (term(EXAMPLE_A), term(EXAMPLE_B));
    let d = distinguish(&a, &b, 3).map_err(|e| e.to_string())?.ok_or("no distinguishing model")?;
    ensure(d.model.base() == 2 && d.args.len() == 1, || {
        format!("base {}, {} arguments", d.model.base(), d.args.len())
    })?;
    let m = d.model;
    let phi = d.args[0];
    let psis = [[0, 0], [1, 1], [0, 1], [1, 0]].map(|t| unary(m, t));
    let codes: Vec<u64> = psis.iter().map(|p| prime_power_code(p).unwrap()).collect();
    ensure(codes == [1, 6, 3, 2], || format!("codes {codes:?}"))?;
    let values: Vec<u64> = psis.iter().map(|p| phi.apply(p).unwrap().code()).collect();
    ensure(values == [1, 0, 0, 0], || format!("phi values {values:?}"))?;
    let kap = kappa(&phi).map_err(|e| e.to_string())?;
    ensure(kap == 19, || format!("kappa {kap}"))?;
    let cert = separate_two(&a, &b).map_err(|e| e.to_string())?;
    ensure(cert.level == 20, || format!("level {}", cert.level))?;
    let stages = verify_stages(&cert, &Normalizer::default()).map_err(|e| e.to_string())?;
    ensure(stages.numerals == (true, true), || format!("numeral stage {:?}", stages.numerals))?;
    let elapsed = start.elapsed();
    ensure(elapsed < EXAMPLE_LIMIT, || format!("took {elapsed:.1?}"))?;
    Ok(format!("P=2, codes (1,6,3,2), kappa=19, [0]_20/[1]_20 verified syntactically in {elapsed:.1?}"))
}

fn definability() -> Outcome {
    let m = PModel::new(2).unwrap();
    let mut count = 0;
    for t in ["p", "p->p", "(p->p)->p"] {
        for phi in m.enumerate(parse_type(t).unwrap()).map_err(|e| e.to_string())? {
            let i = kappa(&phi).map_err(|e| e.to_string())? as usize;
            let a = define_functional(&phi, i).map_err(|e| e.to_string())?;
            let ok = i_defines_check(&a, &phi, i, 3).map_err(|e| e.to_string())?;
            ensure(ok, || format!("{phi} at level {i}"))?;
            count += 1;
        }
    }
    ensure(count == 2 + 4 + 16, || format!("{count} functionals"))?;
    Ok(format!("{count} functionals defined at their kappa"))
}

fn final_equalities(cert: &SeparationCertificate) -> Result<(), String> {
    let (e, f) = cert.two_valued.clone().ok_or("not two-valued")?;
    for (side, target) in [(&cert.a_prime, e), (&cert.b_prime, f)] {
        let lhs = cert.apply_context(side).map_err(|e| e.to_string())?;
        ensure(decide_eq(&lhs, &target).map_err(|e| e.to_string())?, || "K a e f = e fails".into())?;
    }
    Ok(())
}

fn end_to_end() -> Outcome {
    let pairs = [
        ("church 1 vs 2", church(1, 0), church(2, 0)),
        ("worked example", term(EXAMPLE_A), term(EXAMPLE_B)),
        ("church 0 vs 1", church(0, 0), church(1, 0)),
        ("first vs second", term("\\x:p. \\y:p. x"), term("\\x:p. \\y:p. y")),
        ("argument swap", term("\\g:p->p->p. \\x:p. \\y:p. g x y"), term("\\g:p->p->p. \\x:p. \\y:p. g y x")),
        ("open pair", open_term("g x", &[("g", "p->p"), ("x", "p")]), open_term("x", &[("x", "p")])),
    ];
    let mut levels = Vec::new();
    for (name, a, b) in &pairs {
        let cert = separate_two(a, b).map_err(|e| format!("{name}: {e}"))?;
        ensure(verify(&cert).map_err(|e| e.to_string())?, || format!("{name}: verify false"))?;
        final_equalities(&cert).map_err(|e| format!("{name}: {e}"))?;
        levels.push(cert.level);
    }
    Ok(format!("{} pairs verified at levels {levels:?}", pairs.len()))
}

fn product_free_shape(ty: Ty) -> bool {
    fn pure(t: Ty) -> bool {
        match t.kind() {
            TyKind::Atom(_) => true,
            TyKind::Arrow(a, b) => pure(a) && pure(b),
            _ => false,
        }
    }
    fn product(t: Ty) -> bool {
        match t.kind() {
            TyKind::Prod(a, b) => product(a) && pure(b),
            _ => pure(t),
        }
    }
    ty.kind() == TyKind::Top || product(ty)
}

fn type_normal_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let atoms = [Ty::p(), Ty::atom("q")];
    let mut tiers: BTreeMap<String, usize> = BTreeMap::new();
    let mut steps = 0;
    let mut slowest = Duration::ZERO;
    for n in 0..TYPE_NF_SAMPLES {
        let ty = random_type(&mut rng, TYPE_NF_MAX_NODES, &atoms, true);
        ensure(ty.node_count() <= TYPE_NF_MAX_NODES, || format!("generated {} nodes", ty.node_count()))?;
        for weight in [2, 3] {
            let mut run = |order| {
                let start = Instant::now();
                let trace = catch_unwind(AssertUnwindSafe(|| type_nf_with(ty, order, weight)));
                slowest = slowest.max(start.elapsed());
                trace.map_err(|_| format!("type {n}: non-decreasing step"))
            };
            let inner = run(RedexOrder::LeftmostInnermost)?;
            let outer = run(RedexOrder::LeftmostOutermost)?;
            ensure(inner.output == outer.output, || format!("{}: strategies disagree", ty.short()))?;
            ensure(product_free_shape(inner.output), || {
                format!("{}: output {} not normal", ty.short(), inner.output.short())
            })?;
            ensure(inner.output == product_normal_form(ty), || format!("{}: normal form differs", ty.short()))?;
            for trace in [&inner, &outer] {
                let mut cur = ty;
                for s in &trace.steps {
                    let redex = subtype_at(cur, &s.position).ok_or("bad position")?;
                    let next = replace_at(cur, &s.position, s.rule.contract(redex).ok_or("not a redex")?).unwrap();
                    ensure(s.before == measure(cur, weight) && s.after == measure(next, weight), || {
                        "measure mismatch".into()
                    })?;
                    if let (Measure::Exact(x), Measure::Exact(y)) = (&s.before, &s.after) {
                        ensure(y < x, || format!("{}: step {} does not decrease", ty.short(), s.rule.tag()))?;
                    } else {
                        ensure(s.tier != DecreaseTier::Global, || "global tier without exact measures".into())?;
                    }
                    *tiers.entry(format!("{:?}", s.tier).to_lowercase()).or_default() += 1;
                    steps += 1;
                    cur = next;
                }
                ensure(cur == trace.output, || "trace does not end at its output".into())?;
            }
        }
    }
    ensure(slowest < TYPE_NF_LIMIT, || format!("slowest type took {slowest:.1?}"))?;
    let tiers: Vec<String> = tiers.iter().map(|(k, v)| format!("{k} {v}")).collect();
    Ok(format!("{TYPE_NF_SAMPLES} types, {steps} steps ({}), slowest {slowest:.2?}", tiers.join(", ")))
}

fn isomorphisms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let atoms = [Ty::p(), Ty::atom("q")];
    let norm = Normalizer::default();
    for _ in 0..ISO_SAMPLES {
        let ty = random_type(&mut rng, 15, &atoms, true);
        let iso = build_iso(ty).map_err(|e| e.to_string())?;
        ensure(iso.source() == ty && iso.target() == product_normal_form(ty), || {
            format!("{}: wrong ends", ty.short())
        })?;
        ensure(iso.check(&norm).map_err(|e| e.to_string())?, || format!("{}: round trip fails", ty.short()))?;
    }
    Ok(format!("{ISO_SAMPLES} round trips in both directions"))
}

fn product_separation() -> Outcome {
    let pairs = [
        ("\\x:p*p. <p1 x, p2 x>", "\\x:p*p. <p2 x, p1 x>"),
        ("\\x:p. \\y:p. <x, y>", "\\x:p. \\y:p. <y, x>"),
        ("\\z:(p*p)->p. \\x:p. \\y:p. z <x, y>", "\\z:(p*p)->p. \\x:p. \\y:p. z <y, x>"),
        ("\\x:p*(p*T). p1 x", "\\x:p*(p*T). p1 (p2 x)"),
        ("\\x:T*((p->p)->p). p2 x (\\y:p. y)", "\\x:T*((p->p)->p). p2 x (\\y:p. p2 x (\\z:p. y))"),
    ];
    let x = Term::free("x", Ty::prod(Ty::p(), Ty::p()));
    let (p1x, p2x) = (Term::fst(x.clone()).unwrap(), Term::snd(x).unwrap());
    let mut indices = Vec::new();
    for (a, b) in pairs {
        let cert = separate_prod(&term(a), &term(b)).map_err(|e| format!("{a}: {e}"))?;
        ensure(verify_product(&cert).map_err(|e| e.to_string())?, || format!("{a}: verify false"))?;
        let ends = cert.inner.two_valued.clone().ok_or("not two-valued")?;
        ensure(ends == (p1x.clone(), p2x.clone()), || format!("{a}: targets are not p1 x, p2 x"))?;
        for (side, want) in [(&cert.a_prime, &p1x), (&cert.b_prime, &p2x)] {
            let lhs = cert.apply_context(side).map_err(|e| e.to_string())?;
            ensure(decide_eq(&lhs, want).map_err(|e| e.to_string())?, || format!("{a}: final equality fails"))?;
        }
        indices.push(cert.index);
    }
    Ok(format!("{} pairs verified, component indices {indices:?}", pairs.len()))
}

fn ccc() -> Outcome {
    let report = check_axioms_with(8, AXIOM_INSTANCES, &Normalizer::default());
    for a in &report.axioms {
        ensure(a.failures.is_empty(), || format!("{}: {}", a.name, a.failures.join("; ")))?;
        ensure(a.instances == AXIOM_INSTANCES, || format!("{}: {} instances", a.name, a.instances))?;
    }
    ensure(report.axioms.len() == 7, || format!("{} axioms", report.axioms.len()))?;

    let cert =
        collapse(&parse_arrow("p1[p, p]").unwrap(), &parse_arrow("p2[p, p]").unwrap()).map_err(|e| e.to_string())?;
    let rep = replay(&cert).map_err(|e| e.to_string())?;
    ensure(rep.verified(), || "collapse replay fails".into())?;
    ensure(rep.steps.iter().any(|s| s.holds && s.equation == "p1[C, C] = p2[C, C]"), || "p1 = p2 not derived".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let atoms = [Ty::p(), Ty::atom("q")];
    for _ in 0..COMPOSITES {
        let source = random_type(&mut rng, 7, &atoms, true);
        let f = random_arrow(&mut rng, source, 2, &atoms);
        let g = random_arrow(&mut rng, f.target(), 2, &atoms);
        let gf = ArrowTerm::compose(g.clone(), f.clone());
        let (fl, gl) = (to_lambda(&f).map_err(|e| e.to_string())?, to_lambda(&g).map_err(|e| e.to_string())?);
        let x = Term::free("x", source);
        let want = Term::lam("x", source, ap(&gl, &[ap(&fl, &[x])])).unwrap();
        let got = to_lambda(&gf).map_err(|e| e.to_string())?;
        ensure(decide_eq(&got, &want).map_err(|e| e.to_string())?, || format!("functoriality fails for {gf}"))?;
        let id = to_lambda(&ArrowTerm::Id(source)).map_err(|e| e.to_string())?;
        let x = Term::free("x", source);
        ensure(decide_eq(&id, &Term::lam("x", source, x).unwrap()).unwrap(), || "identity fails".into())?;
    }
    Ok(format!(
        "7 axioms x {AXIOM_INSTANCES} instances, collapse replay derives p1[C, C] = p2[C, C], {COMPOSITES} composites"
    ))
}

fn oracle_cross_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut equal, mut distinguished, mut open, mut unrepresentable) = (0, 0, 0, 0);
    let mut violations = Vec::new();
    for _ in 0..ORACLE_PAIRS {
        let (a, b) = random_pure_pair(&mut rng, ORACLE_DEPTH, 6);
        ensure(a.ty().depth() <= ORACLE_DEPTH, || format!("type {} too deep", a.ty().short()))?;
        let eq = decide_eq(&a, &b).map_err(|e| e.to_string())?;
        match (eq, distinguish(&a, &b, ORACLE_BASE)) {
            (true, Ok(None)) => equal += 1,
            (false, Ok(Some(_))) => distinguished += 1,
            (false, Ok(None)) => open += 1,
            (false, Err(_)) => unrepresentable += 1,
            (true, Ok(Some(_))) => violations.push(format!("{a} / {b}: equal but distinguished")),
            (true, Err(e)) => violations.push(format!("{a} / {b}: equal but search failed: {e}")),
        }
    }
    ensure(violations.is_empty(), || format!("{} violations: {}", violations.len(), violations.join("; ")))?;
    Ok(format!(
        "{ORACLE_PAIRS} pairs: {equal} equal, {distinguished} distinguished, {open} unequal without a model up to base \
         {ORACLE_BASE}, {unrepresentable} unequal with arguments beyond the code cap, 0 violations"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("combinator equalities", combinator_suite),
        ("worked separation example", worked_example),
        ("exhaustive definability at base 2", definability),
        ("end-to-end separation", end_to_end),
        ("type normal forms", type_normal_forms),
        ("type isomorphisms", isomorphisms),
        ("product separation", product_separation),
        ("cartesian closed categories", ccc),
        ("decision procedure against models", oracle_cross_check),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
