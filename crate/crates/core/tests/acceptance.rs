//! Acceptance suite. Prints one line per criterion and exits non-zero if any fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spinwreath_core::chartable::{build_table, q_function_dual_path, raising_expand};
use spinwreath_core::checks::{
    heisenberg_check, heisenberg_transport_check, hopf_adjoint_check, hopf_product_check, isometry_check, oracle_class_checks,
    oracle_table_check, oracle_trace_check,
};
use spinwreath_core::fock::{FockMonomial, FockSpace, FockVector};
use spinwreath_core::gamma::{identify_affine, AffineType, GammaData};
use spinwreath_core::partitions::{enumerate, PartitionKind};
use spinwreath_core::scalars::rat;
use spinwreath_core::{builtin, CheckReport, CycScalar, MultiPartition, Partition, SpinAlgebra, TwistedSpace, VirtualChar};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn from_reports(reports: &[CheckReport]) -> Self {
        let instances: u64 = reports.iter().map(|r| r.instances).sum();
        match reports.iter().find(|r| !r.passed()) {
            None => Outcome { passed: true, detail: format!("{} relations, {instances} instances", reports.len()) },
            Some(r) => Outcome {
                passed: false,
                detail: format!("{} {}: {}", r.relation, r.params, r.witness.as_deref().unwrap_or("")),
            },
        }
    }

    fn fail(detail: impl Into<String>) -> Self {
        Outcome { passed: false, detail: detail.into() }
    }
}

fn run(id: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let ok = out.passed && in_time;
    println!(
        "criterion {id}: {} (tolerance: exact; {:.1}s of {}s) {}{}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs(),
        out.detail,
        if in_time { "" } else { " [over time budget]" },
    );
    ok
}

const ORACLE_CASES: [(&str, usize); 5] = [("trivial", 2), ("trivial", 3), ("trivial", 4), ("cyclic:2", 2), ("cyclic:2", 3)];

fn criterion_1() -> Outcome {
    let mut reports = Vec::new();
    for (name, n) in ORACLE_CASES {
        let b = builtin(name).unwrap();
        let mut r = oracle_class_checks(&b, n);
        r.pop();
        reports.extend(r);
    }
    Outcome::from_reports(&reports)
}

fn criterion_2() -> Outcome {
    let reports: Vec<_> = ORACLE_CASES.iter().map(|&(name, n)| oracle_trace_check(&builtin(name).unwrap(), n)).collect();
    Outcome::from_reports(&reports)
}

fn random_self_dual(g: &GammaData, rng: &mut ChaCha8Rng) -> VirtualChar {
    let k = g.num_classes();
    let mut coeffs = vec![0i64; k];
    for i in 0..k {
        let j = g.dual_index(i);
        if j >= i {
            let c = rng.gen_range(-3..=3);
            coeffs[i] = c;
            coeffs[j] = c;
        }
    }
    VirtualChar { coeffs }
}

fn mckay_type(g: &GammaData) -> VirtualChar {
    g.mckay_xi(None).or_else(|_| g.mckay_xi(Some(0))).unwrap()
}

fn forms(g: &GammaData, rng: &mut ChaCha8Rng) -> Vec<VirtualChar> {
    vec![VirtualChar::standard(g.num_classes()), mckay_type(g), random_self_dual(g, rng)]
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut reports = Vec::new();
    for name in ["trivial", "cyclic:3"] {
        let g = builtin(name).unwrap().data;
        for xi in forms(&g, &mut rng) {
            let space = FockSpace::new(&g, &xi).unwrap();
            reports.push(heisenberg_check(&space, 9, 12));
        }
    }
    Outcome::from_reports(&reports)
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut reports = Vec::new();
    for name in ["trivial", "cyclic:3"] {
        let g = builtin(name).unwrap().data;
        let alg = SpinAlgebra::new(g.clone());
        for xi in forms(&g, &mut rng) {
            reports.push(isometry_check(&alg, &xi, 8));
        }
        reports.push(heisenberg_transport_check(&alg, &VirtualChar::standard(g.num_classes()), 4));
        reports.push(hopf_product_check(&alg, 6));
        reports.push(hopf_adjoint_check(&alg, 6));
    }
    Outcome::from_reports(&reports)
}

fn criterion_5() -> Outcome {
    let mut reports = Vec::new();
    for name in ["trivial", "cyclic:2"] {
        let space = TwistedSpace::standard(builtin(name).unwrap().data);
        reports.extend(space.clifford_check(3, 6));
    }
    Outcome::from_reports(&reports)
}

fn affine_spaces() -> Vec<(TwistedSpace, Vec<Vec<usize>>)> {
    ["cyclic:2", "cyclic:3"]
        .iter()
        .map(|name| {
            let g = builtin(name).unwrap().data;
            let r = g.num_classes();
            let xi = g.mckay_xi(None).unwrap();
            (TwistedSpace::new(g, xi).unwrap(), vec![(0..r).collect(), (1..r).collect()])
        })
        .collect()
}

fn criterion_6(xx: (i64, i64)) -> Outcome {
    let mut reports = Vec::new();
    for (space, index_sets) in affine_spaces() {
        reports.extend(space.affine_relation_checks(&index_sets, 3, 8, xx).concat());
    }
    Outcome::from_reports(&reports)
}

fn criterion_7() -> Outcome {
    let mut cases: Vec<(String, AffineType)> = (2..=6).map(|k| (format!("cyclic:{k}"), AffineType::A(k - 1))).collect();
    cases.push(("quaternion8".into(), AffineType::D(4)));
    for (name, expect) in &cases {
        let g = builtin(name).unwrap().data;
        let c = g.cartan_matrix(&g.mckay_xi(None).unwrap()).unwrap();
        let got = identify_affine(&c);
        if got != Some(*expect) {
            return Outcome::fail(format!("{name}: expected {expect:?}, got {got:?}"));
        }
    }
    Outcome { passed: true, detail: format!("{} groups identified", cases.len()) }
}

fn criterion_8() -> Outcome {
    let mut tables = 0;
    for (name, max_n) in [("trivial", 5), ("cyclic:2", 3), ("cyclic:3", 2)] {
        let g = builtin(name).unwrap().data;
        for n in 0..=max_n {
            if let Err(e) = build_table(&g, n, true) {
                return Outcome::fail(format!("{name} n={n}: {e}"));
            }
            tables += 1;
        }
    }
    let t = build_table(&builtin("trivial").unwrap().data, 3, true).unwrap();
    let expect = vec![vec![8, 2], vec![4, -2]];
    if t.integer_values().as_ref() != Some(&expect) {
        return Outcome::fail(format!("trivial n=3: {:?}", t.integer_values()));
    }
    let trivial = builtin("trivial").unwrap();
    let reports: Vec<_> = (1..=4).map(|n| oracle_table_check(&trivial, n)).collect();
    let o = Outcome::from_reports(&reports);
    if !o.passed {
        return o;
    }
    Outcome { passed: true, detail: format!("{tables} tables checked; trivial n=3 = [[8,2],[4,-2]]; oracle rows: {}", o.detail) }
}

fn criterion_9() -> Outcome {
    let mut count = 0;
    for name in ["trivial", "cyclic:2"] {
        let space = TwistedSpace::standard(builtin(name).unwrap().data);
        let k = space.gamma.num_classes();
        for n in 0..=5 {
            for lambda in enumerate(PartitionKind::Strict, n, k) {
                if let Err(e) = q_function_dual_path(&space, &lambda) {
                    return Outcome::fail(format!("{name} {lambda}: {e}"));
                }
                count += 1;
            }
        }
    }
    let g = builtin("trivial").unwrap().data;
    let fock = FockSpace::standard(&g);
    let lambda = MultiPartition(vec![Partition::new(vec![2, 1])]);
    let q = raising_expand(&fock, &lambda).unwrap();
    let m = |f: &[(u32, usize)]| FockVector::monomial(FockMonomial::new(f.to_vec()), CycScalar::one());
    let expect = m(&[(1, 0), (1, 0), (1, 0)]).sub(&m(&[(3, 0)])).scale(&CycScalar::from_rational(rat(4, 3)));
    if q != expect {
        return Outcome::fail(format!("Q_(2,1) = {q}"));
    }
    Outcome { passed: true, detail: format!("{count} Q-functions agree on both paths; Q_(2,1) = (4/3)(a_-1^3 - a_-3)") }
}

fn criterion_10() -> Outcome {
    let mut checked = 0;
    for k in 1..=3 {
        for n in 0..=12 {
            let op = enumerate(PartitionKind::Odd, n, k).len();
            let sp = enumerate(PartitionKind::Strict, n, k).len();
            let plus = enumerate(PartitionKind::StrictEven, n, k).len();
            let minus = enumerate(PartitionKind::StrictOdd, n, k).len();
            if op != sp || plus + minus != sp {
                return Outcome::fail(format!("n={n} |X|={k}: OP {op}, SP {sp}, SP+ {plus}, SP- {minus}"));
            }
            checked += 1;
        }
    }
    Outcome { passed: true, detail: format!("{checked} (n, |X|) pairs") }
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        run("1", secs(120), criterion_1),
        run("2", secs(60), criterion_2),
        run("3", secs(60), criterion_3),
        run("4", secs(120), criterion_4),
        run("5", secs(120), criterion_5),
        run("6", secs(300), || criterion_6((8, 8))),
        run("6 (x-x as 8h + 4n delta C)", secs(300), || criterion_6((8, 4))),
        run("7", secs(10), criterion_7),
        run("8", secs(300), criterion_8),
        run("9", secs(60), criterion_9),
        run("10", secs(10), criterion_10),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} of {} lines passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
