//! Acceptance gate: one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use quadgor::construct::{self, HFamily};
use quadgor::groebner::IdealHandle;
use quadgor::inverse;
use quadgor::koszul::{self, BoundVerdict, Verdict};
use quadgor::quotient::QuotientRing;
use quadgor::resolution::{self, betti_table, gorenstein_diagnostics, hilbert};
use quadgor::ring::binomial;
use quadgor::{AlternatingMatrix, BettiTable, Field, PolyRing, Polynomial, PrimeField, Rationals};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn family_ideal<F: Field>(k: F, c: usize) -> IdealHandle<F> {
    let (d, f) = inverse::family_f(k, c).unwrap();
    let s = inverse::acting_ring(&d).unwrap();
    inverse::annihilator(&s, &d, &[f]).unwrap()
}

fn g_ideal() -> IdealHandle<Rationals> {
    let (d, g) = inverse::example_g(Rationals).unwrap();
    let s = inverse::acting_ring(&d).unwrap();
    inverse::annihilator(&s, &d, &[g]).unwrap()
}

fn table(entries: &[(usize, i64, u64)]) -> BettiTable {
    let mut t = BettiTable::new();
    for &(i, j, v) in entries {
        t.set(i, j, v);
    }
    t
}

fn criterion_1() -> Check {
    let mut notes = Vec::new();
    for c in 7..=10usize {
        let i = family_ideal(PrimeField::default(), c);
        let gens = i.minimal_generators().map_err(|e| e.to_string())?;
        let quadrics = gens.iter().filter(|g| g.degree() == Some(2)).count();
        ensure(quadrics == c * (c - 3) / 2 && quadrics == gens.len(), || {
            format!("c={c}: {} generators, {quadrics} quadrics", gens.len())
        })?;
        let h = hilbert(&i).unwrap().h_vector;
        let ci = c as i64;
        ensure(h == Some(vec![1, ci, 2 * ci, ci, 1]), || format!("c={c}: h = {h:?}"))?;
        let g = gorenstein_diagnostics(&i).unwrap();
        ensure(g.gorenstein && g.cm_type == 1 && g.betti_symmetric, || format!("c={c}: {g:?}"))?;
        notes.push(format!("c={c}: {quadrics} quadrics"));
    }
    Ok(notes.join(", "))
}

fn criterion_2() -> Check {
    let i = family_ideal(PrimeField::default(), 7);
    let t = betti_table(&i).unwrap();
    let want = table(&[
        (0, 0, 1),
        (1, 2, 14),
        (2, 3, 21),
        (2, 4, 36),
        (3, 5, 126),
        (4, 6, 126),
        (5, 7, 36),
        (5, 8, 21),
        (6, 9, 14),
        (7, 11, 1),
    ]);
    ensure(t == want, || format!("got {:?}", t.triples()))?;
    Ok("(1; 14, 21; 36, 126, 126, 36; 21, 14; 1)".into())
}

fn criterion_3() -> Check {
    let mut notes = Vec::new();
    for c in 7..=10usize {
        let start = Instant::now();
        let i = family_ideal(PrimeField::default(), c);
        let w = koszul::syzygy_obstruction(&i).map_err(|e| e.to_string())?;
        let w = w.ok_or_else(|| format!("c={c}: no obstruction witness"))?;
        ensure(koszul::verify_witness(i.ring(), &w.generators, &w.syzygy), || format!("c={c}: witness fails verification"))?;
        let q = QuotientRing::new(&i).unwrap();
        let b = koszul::resolve_residue_field(&q, 3, 1).unwrap();
        let off = b.first_off_diagonal().ok_or_else(|| format!("c={c}: no off-diagonal entry up to i = 3"))?;
        ensure(off.0 <= 3, || format!("c={c}: first off-diagonal at i = {}", off.0))?;
        let elapsed = start.elapsed();
        ensure(elapsed <= Duration::from_secs(60), || format!("c={c}: {elapsed:?}"))?;
        if c == 7 {
            let v = b.table.get(3, 4);
            println!(
                "      c=7: computed β^R_{{3,4}}(k) = {v}; published toric value 1, compared through the Artinian reduction: {}",
                if v == 1 { "agrees" } else { "differs" }
            );
        }
        notes.push(format!("c={c}: β^R_{{{},{}}} = {} in {:.2?}", off.0, off.1, off.2, elapsed));
    }
    Ok(notes.join(", "))
}

fn criterion_4() -> Check {
    let i = g_ideal();
    let gens = i.minimal_generators().unwrap();
    ensure(gens.len() == 9 && gens.iter().all(|g| g.degree() == Some(2)), || format!("{} generators", gens.len()))?;
    let h = hilbert(&i).unwrap().h_vector;
    ensure(h == Some(vec![1, 6, 12, 6, 1]), || format!("h = {h:?}"))?;
    let t = betti_table(&i).unwrap();
    let want = table(&[(0, 0, 1), (1, 2, 9), (2, 3, 4), (2, 4, 40), (3, 5, 72), (4, 6, 40), (4, 7, 4), (5, 8, 9), (6, 10, 1)]);
    ensure(t == want, || format!("Betti {:?}", t.triples()))?;
    let b = koszul::degree2_betti_bound(&t).unwrap();
    ensure(b == BoundVerdict::NotKoszul { beta_2_4: 40, bound: 36 }, || format!("{b:?}"))?;
    Ok("over Q: 9 quadrics, h = (1,6,12,6,1), Betti exact, 40 > 36".into())
}

fn deviation_two(c: usize, seed: u64) -> (IdealHandle<PrimeField>, construct::DeviationTwoReport) {
    let (r, spec) = construct::random_deviation_two(PrimeField::default(), c, seed).unwrap();
    construct::build_deviation_two(&r, &spec).unwrap()
}

fn criterion_5() -> Check {
    let mut notes = Vec::new();
    for c in [4usize, 5] {
        let (i, rep) = deviation_two(c, 2024);
        ensure(rep.valid(), || format!("c={c}: {:?}", rep.failure))?;
        let t = betti_table(&i).unwrap();
        let ci = c as i64;
        for k in 0..=ci {
            let lin = 5 * binomial(ci - 3, k - 1) + binomial(ci - 3, k);
            let sub = 5 * binomial(ci - 3, k - 2) + binomial(ci - 3, k - 3);
            if k >= 1 {
                ensure(t.get(k as usize, 2 * k) == lin, || format!("c={c}: β_{{{k},{}}} = {}", 2 * k, t.get(k as usize, 2 * k)))?;
                ensure(t.get(k as usize, 2 * k - 1) == sub, || format!("c={c}: β_{{{k},{}}}", 2 * k - 1))?;
            }
            let total = binomial(ci, k) + 2 * binomial(ci - 2, k - 1);
            ensure(t.total(k as usize) == total, || format!("c={c}: β_{k} = {}", t.total(k as usize)))?;
        }
        let h = hilbert(&i).unwrap();
        ensure(h.multiplicity == 5 << (c - 3), || format!("c={c}: e = {}", h.multiplicity))?;
        ensure(t.regularity() == ci - 1, || format!("c={c}: reg = {}", t.regularity()))?;
        let cert = koszul::koszul_certificate(&i, 4, 2).unwrap();
        ensure(cert.verdict == Verdict::KoszulUpTo(4), || format!("c={c}: {:?}", cert.verdict))?;
        notes.push(format!("c={c}: e = {}, KoszulUpTo(4)", h.multiplicity));
    }
    Ok(notes.join(", "))
}

/// `I` Artinian, generated by quadrics, containing a quadric complete intersection `L`.
fn random_link_pair(seed: u64) -> (IdealHandle<PrimeField>, IdealHandle<PrimeField>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = 2 + (seed % 3) as usize;
    let r = PolyRing::new(PrimeField::default(), c).unwrap();
    let l: Vec<Polynomial<PrimeField>> = (0..c).map(|_| r.random_form(2, &mut rng)).collect();
    let dim_s2 = c * (c + 1) / 2;
    let room = dim_s2 - c;
    let extra = 1 + (seed as usize / 3) % room.max(1);
    let mut gens = l.clone();
    gens.extend((0..extra.min(room)).map(|_| {
        // sparse quadrics give a wider range of h-vectors than dense ones
        let x = r.var((seed as usize) % c);
        let y = r.random_form(1, &mut rng);
        r.mul(&x, &y)
    }));
    (IdealHandle::new(&r, l), IdealHandle::new(&r, gens))
}

fn criterion_6() -> Check {
    let mut verified = 0;
    let mut shapes = std::collections::BTreeSet::new();
    for seed in 0..24u64 {
        let (l, i) = random_link_pair(seed);
        if i.is_unit() || l.contains_ideal(&i) {
            continue;
        }
        let (_, rep) = construct::link(&l, &i).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(rep.identity_holds == Some(true), || format!("seed {seed}: {rep:?}"))?;
        ensure(rep.involution, || format!("seed {seed}: (L : J) != I"))?;
        shapes.insert(rep.h_i.clone());
        verified += 1;
    }
    ensure(verified >= 20, || format!("only {verified} links verified"))?;
    let c = 5usize;
    let (i, _) = deviation_two(c, 77);
    let l = construct::general_quadric_ci(&i, 78).unwrap();
    let (j, rep) = construct::link(&l, &i).unwrap();
    ensure(rep.identity_holds == Some(true), || format!("deviation-two link: {rep:?}"))?;
    let ci = c as i64;
    let want: Vec<i64> = (0..ci - 1).map(|k| binomial(ci - 1, k) as i64 - binomial(ci - 3, k - 2) as i64).collect();
    ensure(rep.h_j == want, || format!("h(S/J) = {:?}, expected {want:?}", rep.h_j))?;
    ensure(j.degree_part(1).len() == 1, || "J has no linear form".into())?;
    Ok(format!("{verified} random links ({} distinct h-vectors) + deviation-two link h(S/J) = {want:?}", shapes.len()))
}

/// The rings every corpus-wide criterion runs over, as (name, ideal).
fn corpus() -> Vec<(String, IdealHandle<PrimeField>)> {
    let k = PrimeField::default();
    let mut out = Vec::new();
    for c in 7..=10 {
        out.push((format!("F_{c}"), family_ideal(k.clone(), c)));
    }
    let g = construct::witness_base(k.clone(), construct::WitnessBase::ExampleG).unwrap();
    out.push(("G".into(), g));
    for c in 3..=5 {
        out.push((format!("deviation-two c={c}"), deviation_two(c, 2024).0));
    }
    for c in 2..=4 {
        let r = PolyRing::new(k.clone(), c).unwrap();
        let gens = (0..c).map(|i| r.mul(&r.var(i), &r.var(i))).collect();
        out.push((format!("CI c={c}"), IdealHandle::new(&r, gens)));
    }
    let r = PolyRing::new(k.clone(), 3).unwrap();
    let aci = ["x0*x2 - x1^2", "x0^2 - x1*x2", "x0*x1 - x2^2", "x0^2 + 3*x1^2 + 5*x2^2 + x0*x1"]
        .iter()
        .map(|s| quadgor::parse_polynomial(s, &r).unwrap())
        .collect();
    out.push(("ACI c=3".into(), IdealHandle::new(&r, aci)));
    out
}

fn criterion_7(corpus: &[(String, IdealHandle<PrimeField>)]) -> Check {
    for (name, i) in corpus {
        let t = betti_table(i).unwrap();
        ensure(resolution::euler_identity_check(&t, i.k_polynomial()), || format!("{name}: Euler identity fails"))?;
        if let Some(c) = name.strip_prefix("deviation-two c=") {
            let c: i64 = c.parse().unwrap();
            let kp = i.k_polynomial();
            ensure(kp.coeff(2) == -(c + 2) && kp.coeff(3) == 5, || format!("{name}: t^2 {} t^3 {}", kp.coeff(2), kp.coeff(3)))?;
        }
    }
    Ok(format!("{} rings; deviation-two t^2 = -(c+2), t^3 = +5", corpus.len()))
}

fn criterion_8(corpus: &[(String, IdealHandle<PrimeField>)]) -> Check {
    let mut cis = 0;
    for (name, i) in corpus {
        let r = resolution::regularity_bound_check(i).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.bound_holds, || format!("{name}: reg {} > pd {}", r.regularity, r.projective_dimension))?;
        ensure(r.equality_matches, || format!("{name}: equality does not match CI status"))?;
        ensure(r.complete_intersection == name.starts_with("CI"), || format!("{name}: CI detection"))?;
        cis += usize::from(r.complete_intersection);
    }
    Ok(format!("{} quadratic CM rings, equality on exactly the {cis} complete intersections", corpus.len()))
}

fn criterion_9() -> Check {
    let k = PrimeField::default();
    let r = PolyRing::new(k.clone(), 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for m in [2usize, 4, 6, 8] {
        let upper = (0..m * (m - 1) / 2).map(|_| r.random_form(1, &mut rng)).collect();
        let a = AlternatingMatrix::from_upper(&r, m, upper).unwrap();
        let pf = construct::pfaffian(&r, &a).unwrap();
        ensure(r.mul(&pf, &pf) == construct::determinant(&r, a.rows()), || format!("Pf^2 != det at size {m}"))?;
    }
    for m in [3usize, 5, 7] {
        let upper = (0..m * (m - 1) / 2).map(|_| r.random_form(1, &mut rng)).collect();
        let a = AlternatingMatrix::from_upper(&r, m, upper).unwrap();
        let pf = construct::submaximal_pfaffians(&r, &a).unwrap();
        ensure(a.apply(&r, &pf).iter().all(|e| e.is_zero()), || format!("M·pf != 0 at size {m}"))?;
    }
    // annihilator and inverse system round trip
    let d = inverse::inverse_ring(k.clone(), 4).unwrap();
    let s = inverse::acting_ring(&d).unwrap();
    for _ in 0..3 {
        let f = d.random_form(3, &mut rng);
        let ann = inverse::annihilator(&s, &d, &[f.clone()]).unwrap();
        let dual = inverse::dual_module(&d, &ann, 4).unwrap();
        ensure(dual.len() == 1 && dual[0].monic(d.field()) == f.monic(d.field()), || "dual of (0 : F) is not F".into())?;
        ensure(inverse::annihilator(&s, &d, &dual).unwrap().equals(&ann), || "annihilator round trip".into())?;
    }
    // Betti tables do not depend on the order or on variable names
    for (name, i) in corpus().into_iter().filter(|(n, _)| !n.starts_with("F_1") && !n.starts_with("F_9")) {
        let t = betti_table(&i).unwrap();
        ensure(betti_table(&i.with_order(quadgor::MonomialOrder::Lex)).unwrap() == t, || format!("{name}: lex"))?;
        let n = i.ring().nvars();
        let perm: Vec<usize> = (0..n).map(|v| (v + 1) % n).collect();
        ensure(betti_table(&i.permuted(&perm)).unwrap() == t, || format!("{name}: permutation"))?;
    }
    Ok("Pf^2 = det to size 8, M·pf = 0, inverse-system round trips, Betti invariance (random suites in tests/properties.rs)".into())
}

fn criterion_10() -> Check {
    let mut notes = Vec::new();
    for c in 3..=5usize {
        let (i, rep) = deviation_two(c, 31);
        ensure(rep.valid(), || format!("c={c}: {:?}", rep.failure))?;
        ensure(construct::hvector_checks(&i, HFamily::DeviationTwo), || format!("c={c}: h-vector"))?;
        let cert = koszul::koszul_certificate(&i, 4, 2).unwrap();
        ensure(cert.verdict == Verdict::KoszulUpTo(4), || format!("c={c}: {:?}", cert.verdict))?;
        notes.push(format!("c={c}"));
    }
    Ok(format!(
        "Koszulness of deviation-two rings is certified only as KoszulUpTo(4) plus structure checks ({})",
        notes.join(", ")
    ))
}

#[test]
fn acceptance() {
    let corpus = corpus();
    let results: Vec<(&str, Check)> = vec![
        ("1 family F_c, c = 7..10: generators, h-vector, Gorenstein", criterion_1()),
        ("2 F_7 Betti table", criterion_2()),
        ("3 non-Koszul certificates for F_c, c = 7..10", criterion_3()),
        ("4 codimension-six example over Q", criterion_4()),
        ("5 deviation-two closed forms at c = 4, 5", criterion_5()),
        ("6 linkage h-vector identity", criterion_6()),
        ("7 Euler identities on the corpus", criterion_7(&corpus)),
        ("8 reg <= pd, equality exactly for complete intersections", criterion_8(&corpus)),
        ("9 property suites", criterion_9()),
        ("10 KoszulUpTo(4) scope for deviation-two rings", criterion_10()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
