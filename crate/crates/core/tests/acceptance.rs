//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;
use std::time::Instant;

use acsl_core::cyclotomic::{cyclotomic_polynomial, CycNum};
use acsl_core::diagram::{parse_pd, Crossing, Diagram, Framing};
use acsl_core::invariants::{s3_expectation, simplicial_satellite, CouplingLevel, Invariant};
use acsl_core::link::{FramedLink, Role};
use acsl_core::manifolds::{s1xs2_presentation, t3_presentation};
use acsl_core::surgery::{
    blow_down, blow_up, handle_slide, oracle_sums, surgery_expectation, SurgeryPresentation,
    DEFAULT_MAX_TERMS,
};
use acsl_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exact vs float agreement, absolute distance in C.
const ORACLE_TOL: f64 = 1e-9;
/// |Φ_n(root)| and coefficient agreement for the cyclotomic check.
const ROOT_TOL: f64 = 1e-8;
const FIELD_SAMPLES: usize = 10_000;

struct Outcome {
    checked: usize,
    skipped: usize,
    failures: Vec<String>,
    note: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            checked: 0,
            skipped: 0,
            failures: Vec::new(),
            note: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Everything evaluated exactly in criteria 1-6, for the float cross-check.
type Instances = Vec<(SurgeryPresentation, Result<Invariant, Error>)>;

fn level(k: i64) -> CouplingLevel {
    CouplingLevel::new(k).unwrap()
}

/// Σ_ij q_i L_ij q_j by plain double loop.
fn brute_q(l: &[Vec<i64>], q: &[i64]) -> i128 {
    let mut s: i128 = 0;
    for i in 0..q.len() {
        for j in 0..q.len() {
            s += q[i] as i128 * l[i][j] as i128 * q[j] as i128;
        }
    }
    s
}

fn expected_phase(q_form: i128, k: i64) -> u64 {
    let n = 4 * k.unsigned_abs() as i128;
    (-(k.signum() as i128) * q_form).rem_euclid(n) as u64
}

fn random_symmetric(r: &mut ChaCha8Rng, n: usize, b: i64) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = r.gen_range(-b..=b);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

fn random_link(r: &mut ChaCha8Rng, n: usize, b: i64, qb: i64) -> FramedLink {
    let l = random_symmetric(r, n, b);
    let q = (0..n).map(|_| r.gen_range(-qb..=qb)).collect();
    FramedLink::new(l, q)
}

fn as_presentation(fl: &FramedLink, k: i64) -> SurgeryPresentation {
    SurgeryPresentation::new(fl.clone(), level(k))
}

// ---------------------------------------------------------------- 1

fn battery() -> Vec<FramedLink> {
    let mut out = Vec::new();
    for f in -3..=3 {
        out.push(FramedLink::unlink(&[f], &[f + 5]));
    }
    let hopf = vec![vec![0, 1], vec![1, 0]];
    out.push(FramedLink::new(hopf.clone(), vec![1, 1]));
    out.push(FramedLink::new(hopf, vec![2, -3]));
    out.push(FramedLink::new(
        vec![vec![1, 1, 0], vec![1, -2, 1], vec![0, 1, 0]],
        vec![1, 2, 3],
    ));
    out.push(FramedLink::new(
        vec![
            vec![0, 1, 0, 0],
            vec![1, 1, 1, 0],
            vec![0, 1, 2, -1],
            vec![0, 0, -1, -1],
        ],
        vec![-1, 4, 2, 1],
    ));
    let mut r = ChaCha8Rng::seed_from_u64(1);
    while out.len() < 20 {
        let n = r.gen_range(3..=4);
        out.push(random_link(&mut r, n, 5, 9));
    }
    out
}

fn criterion_1(inst: &mut Instances) -> Outcome {
    let mut o = Outcome::new();
    for fl in battery() {
        for k in [1, 2, 3, -2] {
            let inv = s3_expectation(&fl, level(k)).unwrap();
            let e = expected_phase(brute_q(&fl.linking, &fl.charges), k);
            let order = 4 * k.unsigned_abs();
            o.check(
                inv.value == CycNum::root_power(order, e as i64) && inv.phase_exponent() == Some(e),
                || {
                    format!(
                        "k={k} {fl:?}: expected exponent {e}, got {:?}",
                        inv.phase_exponent()
                    )
                },
            );
            inst.push((as_presentation(&fl, k), Ok(inv)));
        }
    }
    o.note = "20 links x k in {1,2,3,-2}".into();
    o
}

// ---------------------------------------------------------------- 2

fn criterion_2(inst: &mut Instances) -> Outcome {
    let mut o = Outcome::new();
    let mut r = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let k: i64 = *[1, 2, 3, -2, -3].choose(&mut r).unwrap();
        let n = r.gen_range(1..=4);
        let fl = random_link(&mut r, n, 5, 10);
        let j = r.gen_range(0..n);
        let m = *[-2i64, -1, 1, 2].choose(&mut r).unwrap();
        let mut shifted = fl.clone();
        shifted.charges[j] += m * 2 * k.abs();
        let a = s3_expectation(&fl, level(k)).unwrap();
        let b = s3_expectation(&shifted, level(k)).unwrap();
        o.check(a.value == b.value, || {
            format!("k={k} component {j} shift {m}: {fl:?}")
        });
        inst.push((as_presentation(&shifted, k), Ok(b)));
    }
    o
}

// ---------------------------------------------------------------- 3

fn criterion_3(inst: &mut Instances) -> Outcome {
    let mut o = Outcome::new();
    let mut r = ChaCha8Rng::seed_from_u64(3);
    for t in 0..200 {
        let k: i64 = [1, 2, 3, -2][t % 4];
        let n = r.gen_range(1..=4);
        let fl = random_link(&mut r, n, 4, 7);
        let sat = simplicial_satellite(&fl).unwrap();
        let a = s3_expectation(&fl, level(k)).unwrap();
        let b = s3_expectation(&sat, level(k)).unwrap();
        let unit = sat.charges.iter().all(|q| q.abs() == 1);
        o.check(a.value == b.value && unit, || format!("k={k} {fl:?}"));
        inst.push((as_presentation(&sat, k), Ok(b)));
    }
    o
}

// ---------------------------------------------------------------- 4, 5

/// Random observed block whose first charge is ±1, so any target
/// intersection number can be met by solving for the first row.
fn observed_block(r: &mut ChaCha8Rng, k: i64) -> FramedLink {
    let n = r.gen_range(1..=3);
    let mut fl = random_link(r, n, 3, 2 * k.abs());
    fl.charges[0] = if r.gen_bool(0.5) { 1 } else { -1 };
    fl
}

fn closed_form(fl: &FramedLink, ns: &[i64], k: i64) -> Option<CycNum> {
    let m = 2 * k.abs();
    if ns.iter().any(|n| n.rem_euclid(m) != 0) {
        None
    } else {
        let e = expected_phase(brute_q(&fl.linking, &fl.charges), k);
        Some(CycNum::root_power(4 * k.unsigned_abs(), e as i64))
    }
}

fn compare_closed(
    o: &mut Outcome,
    inst: &mut Instances,
    p: SurgeryPresentation,
    expected: Option<CycNum>,
    ctx: String,
) {
    let got = surgery_expectation(&p);
    let ok = match (&got, &expected) {
        (Ok(inv), None) => inv.is_zero && inv.value.is_zero(),
        (Ok(inv), Some(v)) => !inv.is_zero && inv.value == *v,
        _ => false,
    };
    o.check(ok, || format!("{ctx}: got {got:?}, expected {expected:?}"));
    inst.push((p, got));
}

fn criterion_4(inst: &mut Instances) -> Outcome {
    let mut o = Outcome::new();
    let mut r = ChaCha8Rng::seed_from_u64(4);
    let (mut zeros, mut phases) = (0, 0);
    for k in [1i64, 2, 3, -2] {
        let b = 4 * k.abs();
        for n0 in -b..=b {
            for _ in 0..50 {
                let fl = observed_block(&mut r, k);
                let mut core: Vec<i64> = (0..fl.len()).map(|_| r.gen_range(-4..=4)).collect();
                let rest: i64 = (1..fl.len()).map(|i| fl.charges[i] * core[i]).sum();
                core[0] = fl.charges[0] * (n0 - rest);
                let total: i64 = (0..fl.len()).map(|i| fl.charges[i] * core[i]).sum();
                assert_eq!(total, n0);
                let expected = closed_form(&fl, &[n0], k);
                if expected.is_some() {
                    phases += 1;
                } else {
                    zeros += 1;
                }
                let p = s1xs2_presentation(&fl, &core, level(k)).unwrap();
                compare_closed(&mut o, inst, p, expected, format!("k={k} N0={n0} {fl:?}"));
            }
        }
    }
    o.note = format!("{zeros} vanishing, {phases} phase cases");
    o
}

fn criterion_5(inst: &mut Instances) -> Outcome {
    let mut o = Outcome::new();
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let (mut zeros, mut phases) = (0, 0);
    for k in [1i64, 2, 3] {
        let b = 2 * k;
        for _ in 0..200 {
            // bias a quarter of the samples onto the non-vanishing lattice
            let ns: [i64; 3] = if r.gen_bool(0.25) {
                [0; 3].map(|_| 2 * k * r.gen_range(-1..=1))
            } else {
                [0; 3].map(|_| r.gen_range(-b..=b))
            };
            let fl = observed_block(&mut r, k);
            let mut rows: Vec<[i64; 3]> = (0..fl.len())
                .map(|_| [0; 3].map(|_| r.gen_range(-3..=3)))
                .collect();
            for c in 0..3 {
                let rest: i64 = (1..fl.len()).map(|i| fl.charges[i] * rows[i][c]).sum();
                rows[0][c] = fl.charges[0] * (ns[c] - rest);
            }
            let expected = closed_form(&fl, &ns, k);
            if expected.is_some() {
                phases += 1;
            } else {
                zeros += 1;
            }
            let p = t3_presentation(&fl, &rows, level(k)).unwrap();
            compare_closed(&mut o, inst, p, expected, format!("k={k} N={ns:?} {fl:?}"));
        }
    }
    o.note = format!("{zeros} vanishing, {phases} phase cases");
    o
}

// ---------------------------------------------------------------- 6

fn criterion_6(inst: &mut Instances) -> Outcome {
    let mut o = Outcome::new();
    let mut r = ChaCha8Rng::seed_from_u64(6);
    let mut counts = [0usize; 3];
    let mut denominator_zero = 0;
    for t in 0..500 {
        let k: i64 = [1, 2, 3, -2][t % 4];
        let obs = r.gen_range(0..=2);
        let surg = r.gen_range(1..=3);
        let n = obs + surg;
        let l = random_symmetric(&mut r, n, 2);
        let q = (0..n)
            .map(|i| {
                if i < obs {
                    r.gen_range(-2 * k.abs()..=2 * k.abs())
                } else {
                    0
                }
            })
            .collect();
        let roles = (0..n)
            .map(|i| {
                if i < obs {
                    Role::Observed
                } else {
                    Role::Surgery
                }
            })
            .collect();
        let start = SurgeryPresentation::new(FramedLink::with_roles(l, q, roles), level(k));
        let mut cur = start.clone();
        let len = r.gen_range(1..=5);
        let mut moves = Vec::new();
        for _ in 0..len {
            let fl = &cur.link;
            let surgery: Vec<usize> = (0..fl.len())
                .filter(|&i| fl.roles[i] == Role::Surgery)
                .collect();
            let isolated: Vec<usize> = surgery
                .iter()
                .copied()
                .filter(|&j| {
                    fl.linking[j][j].abs() == 1
                        && (0..fl.len()).all(|i| i == j || fl.linking[i][j] == 0)
                })
                .collect();
            let sign = if r.gen_bool(0.5) { 1 } else { -1 };
            let choice = r.gen_range(0..3);
            let next = if choice == 1 && !isolated.is_empty() {
                let j = *isolated.choose(&mut r).unwrap();
                moves.push(format!("down({j})"));
                counts[1] += 1;
                blow_down(&cur, j).unwrap()
            } else if choice == 2 && fl.len() >= 2 && !surgery.is_empty() {
                let j = *surgery.choose(&mut r).unwrap();
                let mut i = r.gen_range(0..fl.len());
                while i == j {
                    i = r.gen_range(0..fl.len());
                }
                moves.push(format!("slide({i},{j},{sign})"));
                counts[2] += 1;
                handle_slide(&cur, i, j, sign).unwrap()
            } else if surgery.len() < 5 {
                moves.push(format!("up({sign})"));
                counts[0] += 1;
                blow_up(&cur, sign).unwrap()
            } else {
                continue;
            };
            cur = next;
        }
        let a = surgery_expectation(&start);
        let b = surgery_expectation(&cur);
        if a == Err(Error::DenominatorZero) {
            denominator_zero += 1;
        }
        let same = match (&a, &b) {
            (Ok(x), Ok(y)) => x.value == y.value,
            (Err(Error::DenominatorZero), Err(Error::DenominatorZero)) => true,
            _ => false,
        };
        o.check(same, || {
            format!("k={k} moves {moves:?} on {:?}: {a:?} vs {b:?}", start.link)
        });
        inst.push((start, a));
        inst.push((cur, b));
    }
    o.note = format!(
        "{} blow-ups, {} blow-downs, {} slides, {} with vanishing normalization",
        counts[0], counts[1], counts[2], denominator_zero
    );
    o
}

// ---------------------------------------------------------------- 7

fn criterion_7(inst: &Instances) -> Outcome {
    let mut o = Outcome::new();
    for (p, exact) in inst {
        let sums = match oracle_sums(p, DEFAULT_MAX_TERMS) {
            Err(Error::TermLimit { .. }) => {
                o.skipped += 1;
                continue;
            }
            other => other.unwrap(),
        };
        let ok = match (exact, sums.ratio()) {
            (Ok(inv), Some((re, im))) => {
                (inv.numeric.0 - re).hypot(inv.numeric.1 - im) < ORACLE_TOL
            }
            (Err(Error::DenominatorZero), None) => true,
            _ => false,
        };
        o.check(ok, || {
            format!(
                "{:?} k={}: exact {exact:?}, float {:?}",
                p.link,
                p.k.get(),
                sums.ratio()
            )
        });
    }
    o.note = format!("tolerance {ORACLE_TOL:e}");
    o
}

// ---------------------------------------------------------------- 8

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    for n in 1..=64u64 {
        let phi = cyclotomic_polynomial(n);
        let primitive: Vec<u64> = (0..n).filter(|&j| gcd(j, n) == 1).collect();
        let monic = phi.coeffs().last().is_some_and(|c| *c == BigInt::from(1));
        let degree = phi.degree() == Some(primitive.len());
        let roots = primitive.iter().all(|&j| {
            let t = 2.0 * PI * j as f64 / n as f64;
            let (re, im) = phi.eval_complex(t.cos(), t.sin());
            re.hypot(im) < ROOT_TOL
        });
        // x^n - 1 = Π_{d | n} Φ_d, exactly
        let mut prod = vec![BigInt::from(1)];
        for d in (1..=n).filter(|d| n % d == 0) {
            let f = cyclotomic_polynomial(d);
            let mut next = vec![BigInt::zero(); prod.len() + f.coeffs().len() - 1];
            for (i, a) in prod.iter().enumerate() {
                for (j, b) in f.coeffs().iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            prod = next;
        }
        let mut target = vec![BigInt::zero(); n as usize + 1];
        target[0] = BigInt::from(-1);
        target[n as usize] = BigInt::from(1);
        o.check(monic && degree && roots && prod == target, || {
            format!("Φ_{n} = {phi} (monic {monic}, degree {degree}, roots {roots})")
        });
    }

    let mut r = ChaCha8Rng::seed_from_u64(8);
    let orders = [4u64, 8, 12, 20, 28];
    let sample = |r: &mut ChaCha8Rng, n: u64| -> CycNum {
        let len = r.gen_range(1..=n as usize);
        let poly: Vec<BigRational> = (0..len)
            .map(|_| {
                if r.gen_bool(0.3) {
                    BigRational::zero()
                } else {
                    BigRational::new(
                        BigInt::from(r.gen_range(-9..=9)),
                        BigInt::from(r.gen_range(1..=5)),
                    )
                }
            })
            .collect();
        CycNum::from_poly(n, &poly)
    };
    let mut inverses = 0;
    for _ in 0..FIELD_SAMPLES {
        let n = *orders.choose(&mut r).unwrap();
        let (a, b, c) = (sample(&mut r, n), sample(&mut r, n), sample(&mut r, n));
        let zero = CycNum::zero(n);
        let one = CycNum::one(n);
        let mut ok = &(&a + &b) + &c == &a + &(&b + &c)
            && &a + &b == &b + &a
            && &(&a * &b) * &c == &a * &(&b * &c)
            && &a * &b == &b * &a
            && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
            && &a + &zero == a
            && &a * &one == a
            && (&a + &(-&a)).is_zero();
        if !a.is_zero() {
            inverses += 1;
            let inv = a.inverse().unwrap();
            ok &= (&a * &inv).is_one() && (&a * &inv) == one;
        }
        o.check(ok, || format!("axioms fail for a={a:?} b={b:?} c={c:?}"));
    }
    o.note = format!("Φ_1..Φ_64, {FIELD_SAMPLES} field samples, {inverses} inverses");
    o
}

// ---------------------------------------------------------------- 9

/// Sphere planarity: every connected piece of the 4-valent graph has
/// `F = V + 2`, counting faces by corner tracing.
fn planar(crossings: &[Crossing]) -> bool {
    let v = crossings.len();
    if v == 0 {
        return true;
    }
    let mut occ: HashMap<u64, Vec<(usize, usize)>> = HashMap::new();
    for (i, x) in crossings.iter().enumerate() {
        for (s, &e) in x.iter().enumerate() {
            occ.entry(e).or_default().push((i, s));
        }
    }
    let other = |i: usize, s: usize| -> (usize, usize) {
        let o = &occ[&crossings[i][s]];
        if o[0] == (i, s) {
            o[1]
        } else {
            o[0]
        }
    };
    let mut seen = HashSet::new();
    let mut faces = 0;
    for i in 0..v {
        for s in 0..4 {
            if seen.contains(&(i, s)) {
                continue;
            }
            faces += 1;
            let (mut c, mut p) = (i, s);
            while seen.insert((c, p)) {
                (c, p) = other(c, (p + 1) % 4);
            }
        }
    }
    let mut parent: Vec<usize> = (0..v).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for o in occ.values() {
        let (a, b) = (find(&mut parent, o[0].0), find(&mut parent, o[1].0));
        parent[a] = b;
    }
    let pieces = (0..v).filter(|&x| find(&mut parent, x) == x).count();
    faces == v + 2 * pieces
}

/// Brute-force orientation oracle: tries every direction for every
/// over-strand, keeps the assignments that use each transition
/// `e -> succ(e)` exactly once, and returns the linking matrix with
/// blackboard framing. `None` if valid assignments disagree or none exist.
fn oracle_linking(crossings: &[Crossing], components: &[Vec<u64>]) -> Option<Vec<Vec<i64>>> {
    let mut comp = HashMap::new();
    let mut succ = HashMap::new();
    for (ci, c) in components.iter().enumerate() {
        for (p, &e) in c.iter().enumerate() {
            comp.insert(e, ci);
            succ.insert(e, c[(p + 1) % c.len()]);
        }
    }
    let touched: HashSet<u64> = crossings.iter().flatten().copied().collect();
    let needed: HashSet<(u64, u64)> = succ
        .iter()
        .filter(|(e, _)| touched.contains(e))
        .map(|(&e, &s)| (e, s))
        .collect();
    let n = components.len();
    let mut answer: Option<Vec<Vec<i64>>> = None;
    for mask in 0u32..(1 << crossings.len()) {
        let mut used = Vec::new();
        let mut signs = Vec::new();
        for (i, &[a, b, c, d]) in crossings.iter().enumerate() {
            used.push((a, c));
            if mask >> i & 1 == 0 {
                used.push((d, b));
                signs.push(1);
            } else {
                used.push((b, d));
                signs.push(-1);
            }
        }
        let set: HashSet<(u64, u64)> = used.iter().copied().collect();
        if set.len() != used.len() || set != needed {
            continue;
        }
        let mut l = vec![vec![0i64; n]; n];
        for (i, &[a, b, _, _]) in crossings.iter().enumerate() {
            let (u, o) = (comp[&a], comp[&b]);
            if u == o {
                l[u][u] += 2 * signs[i];
            } else {
                l[u][o] += signs[i];
                l[o][u] += signs[i];
            }
        }
        for row in &mut l {
            for x in row.iter_mut() {
                *x /= 2;
            }
        }
        match &answer {
            None => answer = Some(l),
            Some(prev) if *prev != l => return None,
            _ => {}
        }
    }
    answer
}

/// Slot of the occurrence of `e` where it enters a crossing.
fn head_slot(d: &Diagram, e: u64) -> Option<(usize, usize)> {
    for i in 0..d.crossing_count() {
        let x = d.crossings()[i];
        if d.under_strand(i).unwrap().0 == e {
            return Some((i, 0));
        }
        let (oi, _) = d.over_strand(i).unwrap();
        if oi == e {
            let slot = if d.crossing_sign(i).unwrap() == 1 {
                3
            } else {
                1
            };
            assert_eq!(x[slot], e);
            return Some((i, slot));
        }
    }
    None
}

fn max_label(d: &Diagram) -> u64 {
    d.components().iter().flatten().copied().max().unwrap_or(0)
}

fn replace_in_components(comps: &mut [Vec<u64>], e: u64, with: &[u64]) {
    for c in comps.iter_mut() {
        if let Some(p) = c.iter().position(|&x| x == e) {
            c.splice(p..=p, with.iter().copied());
        }
    }
}

/// Reidemeister II: pushes edge `f` over edge `e`. Tries both crossing
/// templates and returns the one that stays planar.
fn r2(d: &Diagram, e: u64, f: u64) -> Option<Diagram> {
    let base = max_label(d) + 1;
    let (e1, e2, f1, f2) = (base, base + 1, base + 2, base + 3);
    let he = head_slot(d, e)?;
    let hf = head_slot(d, f)?;
    let mut xs = d.crossings().to_vec();
    xs[he.0][he.1] = e2;
    xs[hf.0][hf.1] = f2;
    let mut comps = d.components().to_vec();
    replace_in_components(&mut comps, e, &[e, e1, e2]);
    replace_in_components(&mut comps, f, &[f, f1, f2]);
    let templates: [[Crossing; 2]; 2] = [
        [[e, f1, e1, f], [e1, f1, e2, f2]],
        [[e, f, e1, f1], [e1, f2, e2, f1]],
    ];
    templates.into_iter().find_map(|t| {
        let mut cand = xs.clone();
        cand.extend(t);
        if !planar(&cand) {
            return None;
        }
        Diagram::new(cand, comps.clone()).ok()
    })
}

/// Oriented connected sum of the component of `d1` through edge `x` with
/// the component of `d2` through edge `y`.
fn connect_sum(d1: &Diagram, x: u64, d2: &Diagram, y: u64) -> Diagram {
    let off = max_label(d1);
    let y = y + off;
    let d2 = Diagram::new(
        d2.crossings().iter().map(|c| c.map(|e| e + off)).collect(),
        d2.components()
            .iter()
            .map(|c| c.iter().map(|e| e + off).collect())
            .collect(),
    )
    .unwrap();
    let hx = head_slot(d1, x).unwrap();
    let hy = head_slot(&d2, y).unwrap();
    let mut xs1 = d1.crossings().to_vec();
    let mut xs2 = d2.crossings().to_vec();
    xs1[hx.0][hx.1] = y;
    xs2[hy.0][hy.1] = x;
    let mut comps: Vec<Vec<u64>> = Vec::new();
    let cy = d2.component_of_edge(y).unwrap();
    let mut tail2 = d2.components()[cy].clone();
    let py = tail2.iter().position(|&e| e == y).unwrap();
    tail2.rotate_left(py + 1); // starts after y, ends with y
    for c in d1.components() {
        if let Some(px) = c.iter().position(|&e| e == x) {
            let mut merged = c[..=px].to_vec();
            merged.extend(&tail2);
            merged.extend(&c[px + 1..]);
            comps.push(merged);
        } else {
            comps.push(c.clone());
        }
    }
    for (i, c) in d2.components().iter().enumerate() {
        if i != cy {
            comps.push(c.clone());
        }
    }
    xs1.extend(xs2);
    Diagram::new(xs1, comps).unwrap()
}

fn blackboard(d: &Diagram) -> Vec<Vec<i64>> {
    d.linking_matrix(&Framing::Blackboard).unwrap().linking
}

fn diagram_battery() -> Vec<(&'static str, Diagram)> {
    let pd = |s: &str| parse_pd(s).unwrap();
    let hopf = pd("X(1,3,2,4) X(3,1,4,2) C: 1 2; 3 4");
    let trefoil = pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3) C: 1 2 3 4 5 6");
    let chain3 = connect_sum(&hopf, 3, &hopf, 1);
    let chain4 = connect_sum(&chain3, 7, &hopf.mirror(), 1);
    vec![
        ("positive Hopf", hopf.clone()),
        ("negative Hopf", pd("X(1,4,2,3) X(3,2,4,1) C: 1 2; 3 4")),
        ("trefoil", trefoil.clone()),
        (
            "figure eight",
            pd("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8) C: 1 2 3 4 5 6 7 8"),
        ),
        ("positive kink", pd("X(2,2,1,1) C: 1 2")),
        ("negative kink", pd("X(2,1,1,2) C: 1 2")),
        (
            "Hopf and free unknot",
            pd("X(1,3,2,4) X(3,1,4,2) C: 1 2; 3 4; 5"),
        ),
        ("3-chain", chain3),
        ("4-chain", chain4),
        ("trefoil # Hopf", connect_sum(&trefoil, 2, &hopf, 1)),
    ]
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();

    let hopf = parse_pd("X(1,3,2,4) X(3,1,4,2) C: 1 2; 3 4").unwrap();
    let l = hopf.linking_matrix(&Framing::Explicit(vec![0, 0])).unwrap();
    o.check(l.linking == vec![vec![0, 1], vec![1, 0]], || {
        format!("positive Hopf gave {:?}", l.linking)
    });

    let mut r = ChaCha8Rng::seed_from_u64(9);
    let mut diagrams = Vec::new();
    for (name, d) in diagram_battery() {
        // R2 variants must keep the linking matrix
        let mut cur = d.clone();
        for step in 0..3 {
            if cur.crossing_count() + 2 > 14 {
                break;
            }
            let edges: Vec<u64> = cur
                .crossings()
                .iter()
                .flatten()
                .copied()
                .collect::<HashSet<_>>()
                .into_iter()
                .collect();
            let mut edges = edges;
            edges.sort_unstable();
            let next = (0..50).find_map(|_| {
                let e = *edges.choose(&mut r)?;
                let f = *edges.choose(&mut r)?;
                if e == f {
                    return None;
                }
                r2(&cur, e, f)
            });
            match next {
                Some(n) => {
                    o.check(blackboard(&n) == blackboard(&d), || {
                        format!("{name}: R2 step {step} changed the linking matrix: {n}")
                    });
                    cur = n;
                }
                None => break,
            }
        }
        diagrams.push((name.to_string(), d));
        diagrams.push((format!("{name} + R2"), cur));
    }

    for (name, d) in &diagrams {
        let l = blackboard(d);
        let n = d.component_count();
        o.check(planar(d.crossings()), || format!("{name}: not planar"));
        let oracle = oracle_linking(d.crossings(), d.components());
        o.check(oracle.as_ref() == Some(&l), || {
            format!("{name}: library {l:?}, brute force {oracle:?}")
        });
        let m = blackboard(&d.mirror());
        o.check(
            m.iter()
                .flatten()
                .zip(l.iter().flatten())
                .all(|(a, b)| *a == -*b),
            || format!("{name}: mirror gave {m:?} from {l:?}"),
        );
        o.check(d.mirror().mirror() == *d, || {
            format!("{name}: mirror is not an involution")
        });
        for j in 0..n {
            let rev = d.reverse_component(j).unwrap();
            let rl = blackboard(&rev);
            let ok = (0..n).all(|a| {
                (0..n).all(|b| {
                    let s = if (a == j) != (b == j) { -1 } else { 1 };
                    rl[a][b] == s * l[a][b]
                })
            });
            o.check(ok, || {
                format!("{name}: reversing {j} gave {rl:?} from {l:?}")
            });
            o.check(rev.reverse_component(j).unwrap() == *d, || {
                format!("{name}: double reversal of {j} differs")
            });
            // reversal of a component is a sign flip of its charge
            let q: Vec<i64> = (0..n as i64).map(|i| i + 1).collect();
            let mut fl = FramedLink::new(l.clone(), q.clone());
            let mut rfl = FramedLink::new(rl.clone(), q);
            rfl.charges[j] = -rfl.charges[j];
            fl.roles = vec![Role::Observed; n];
            for k in [1, 2, 3] {
                let a = s3_expectation(&fl, level(k)).unwrap();
                let b = s3_expectation(&rfl, level(k)).unwrap();
                o.check(a.value == b.value, || {
                    format!("{name}: reversal changed the invariant")
                });
            }
        }
    }
    let writhes: Vec<String> = diagrams
        .iter()
        .filter(|(n, _)| !n.ends_with("R2"))
        .map(|(n, d)| format!("{n}:{}", d.writhe(0).unwrap()))
        .collect();
    o.note = format!(
        "{} diagrams; writhe of component 0: {}",
        diagrams.len(),
        writhes.join(" ")
    );
    o
}

fn report(id: u32, name: &str, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = run();
    let secs = start.elapsed().as_secs_f64();
    let status = if o.failures.is_empty() {
        "PASS"
    } else {
        "FAIL"
    };
    println!(
        "{status} criterion {id}: {name} ({} checked, {} skipped, {} failed, {secs:.1}s) {}",
        o.checked,
        o.skipped,
        o.failures.len(),
        o.note
    );
    for f in o.failures.iter().take(5) {
        println!("    {f}");
    }
    o.failures.is_empty()
}

fn main() {
    let mut inst: Instances = Vec::new();
    let mut passed = vec![
        report(1, "S3 phase formula", || criterion_1(&mut inst)),
        report(2, "colour periodicity", || criterion_2(&mut inst)),
        report(3, "simplicial satellite", || criterion_3(&mut inst)),
        report(4, "S1xS2 vanishing and phase", || criterion_4(&mut inst)),
        report(5, "S1xT2 vanishing and phase", || criterion_5(&mut inst)),
        report(6, "Kirby move invariance", || criterion_6(&mut inst)),
    ];
    passed.push(report(7, "exact vs float oracle", || criterion_7(&inst)));
    passed.push(report(8, "cyclotomic layer", criterion_8));
    passed.push(report(9, "diagram front end", criterion_9));
    let failed = passed.iter().filter(|p| !**p).count();
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
