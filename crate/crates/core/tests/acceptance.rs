//! The acceptance suite: one test per numbered criterion, each printing a
//! PASS line with the configurations it exhausted. All arithmetic is exact;
//! every assertion is an exact equality.

use std::sync::Arc;

use xsection::chevalley::{Context, SubgroupKind};
use xsection::crosssec::{
    alpha, build_inverse, elliptic_configurations, good_decomposition_of, natural_group,
    orbit_count, sigma_unipotent_count, spaltenstein_demo, t_w_invariants_of, verify_theorem, xi,
    xi_inverse, xi_inverse_polymap, xi_polymap, xi_unchecked, InverseDescriptor, Problem,
};
use xsection::polyfam::{is_unit_constant, PolyFamError, PolyMap};
use xsection::rings::{MapKind, Ring, RingMap};
use xsection::rootdata::DatumAutomorphism;
use xsection::weyl::{delta_classes, WeylElement, WeylGroup};

fn pass(n: u32, msg: &str) {
    println!("criterion {n:02} PASS: {msg}");
}

fn ctx_for(group: &Arc<WeylGroup>, ring: &str) -> Arc<Context> {
    Arc::new(Context::natural(group.clone(), Ring::parse(ring).unwrap()).unwrap())
}

fn untwisted_problem(ctx: &Arc<Context>, w: &WeylElement) -> Problem {
    let group = &ctx.group;
    let delta = DatumAutomorphism::identity(&group.datum);
    let chi = RingMap::identity(ctx.ring.clone());
    let class = delta_classes(group, &delta).into_iter().find(|c| c.contains(w)).unwrap();
    Problem::new(ctx.clone(), delta, chi, class, w.clone()).unwrap()
}

/// Criterion 1: the generator relation suite over F2, F3, Z/4 for the five
/// tested types.
#[test]
fn criterion_01_relation_suite() {
    let mut configs = 0;
    for t in ["A1", "A2", "A3", "B2", "G2"] {
        let group = natural_group(t).unwrap();
        for ring in ["Fq:2", "Fq:3", "Zmod:4"] {
            let c = ctx_for(&group, ring);
            let rank = group.rank();
            // 2.4(a): braid relations between the lifted reflections
            for i in 0..rank {
                for j in i + 1..rank {
                    let m = group.coxeter_mij(i, j) as usize;
                    let mut left = c.one();
                    let mut right = c.one();
                    for k in 0..m {
                        let (a, b) = if k % 2 == 0 { (i, j) } else { (j, i) };
                        left = c.mul(&left, &c.gen_s(a));
                        right = c.mul(&right, &c.gen_s(b));
                    }
                    assert_eq!(left, right, "2.4(a) {t}/{ring} ({i},{j})");
                }
            }
            // 2.4(b) and 2.4(c), exhaustive in h
            for i in 0..rank {
                let s = c.gen_s(i);
                assert_eq!(c.mul(&s, &s), c.gen_t_minus_one(i), "2.4(b) {t}/{ring} {i}");
                for h in c.ring.enumerate().unwrap() {
                    let lhs = c.mul_all(&[&c.invert(&s), &c.gen_x(i, &h), &s]);
                    assert_eq!(lhs, c.gen_y(i, &c.ring.neg(&h)), "2.4(c) {t}/{ring} {i}");
                }
            }
            // 2.5(a)/(b) for every Weyl element and every h
            let uminus = c.u_minus_set().unwrap();
            for w in &group.elements {
                let lw = c.lift(w);
                for i in 0..rank {
                    for h in c.ring.enumerate().unwrap() {
                        if group.is_right_ascent(w, i) {
                            let g = c.mul_all(&[&lw, &c.gen_x(i, &h), &c.invert(&lw)]);
                            assert!(c.in_u(&g).unwrap(), "2.5(a) {t}/{ring} {:?} {i}", w.word);
                        }
                        if group.is_left_ascent(w, i) {
                            let g = c.mul_all(&[&c.invert(&lw), &c.gen_y(i, &h), &lw]);
                            assert!(uminus.contains(&g.mat), "2.5(b) {t}/{ring} {:?} {i}", w.word);
                        }
                    }
                }
            }
            // 2.3(b)
            let u = c.u_table().unwrap();
            let both: Vec<_> = u.elems.iter().filter(|g| uminus.contains(&g.mat)).collect();
            assert_eq!(both.len(), 1, "2.3(b) {t}/{ring}");
            assert!(both[0].mat.is_identity(&c.ring));
            configs += 1;
        }
    }
    pass(1, &format!("relations 2.4(a-c), 2.5(a-b), 2.3(b) over {configs} (type, ring) pairs"));
}

/// Criterion 2: parametrization cardinalities over F_q.
#[test]
fn criterion_02_cardinalities() {
    let mut checked = 0;
    for (t, rings) in
        [("A2", &["Fq:2", "Fq:3"][..]), ("A3", &["Fq:2", "Fq:3"]), ("B2", &["Fq:2", "Fq:3"]), ("G2", &["Fq:2"])]
    {
        let group = natural_group(t).unwrap();
        let delta = DatumAutomorphism::identity(&group.datum);
        let n = group.longest_element().length;
        for ring in rings {
            let c = ctx_for(&group, ring);
            let q = c.ring.size().unwrap();
            let u = c.u_table().unwrap();
            assert_eq!(u.len() as u64, q.pow(n as u32), "|U| {t}/{ring}");
            for (_, w) in elliptic_configurations(&group, &delta) {
                let z = c.z_table(&w.word).unwrap();
                assert_eq!(z.len() as u64, q.pow(w.length as u32), "|U^w ẇ| {t}/{ring}");
                let mut cell = std::collections::HashSet::new();
                for ze in &z.elems {
                    for ue in &u.elems {
                        cell.insert(c.mul(ze, ue).mat.clone());
                    }
                }
                assert_eq!(
                    cell.len() as u64,
                    q.pow((w.length + n) as u32),
                    "|U ẇ U| {t}/{ring} w={:?}",
                    w.word
                );
                checked += 1;
            }
        }
    }
    pass(2, &format!("|U|, |U^w ẇ|, |UẇU| match q-powers for {checked} configurations"));
}

fn untwisted_configs() -> Vec<(&'static str, &'static str)> {
    vec![
        ("A1", "Fq:2"),
        ("A1", "Fq:3"),
        ("A2", "Fq:2"),
        ("A2", "Fq:3"),
        ("A3", "Fq:2"),
        ("A3", "Fq:3"),
        ("B2", "Fq:2"),
        ("B2", "Fq:3"),
        ("G2", "Fq:2"),
    ]
}

/// Criterion 3: untwisted bijectivity plus pointwise inverse recovery.
#[test]
fn criterion_03_theorem_untwisted() {
    let mut runs = 0;
    for (t, ring) in untwisted_configs() {
        let group = natural_group(t).unwrap();
        let delta = DatumAutomorphism::identity(&group.datum);
        let c = ctx_for(&group, ring);
        for (_, w) in elliptic_configurations(&group, &delta) {
            let p = untwisted_problem(&c, &w);
            let v = verify_theorem(&p).unwrap();
            assert!(v.bijective(), "{t}/{ring} w={:?} not bijective", w.word);
            assert!(v.inverse_ok, "{t}/{ring} w={:?} inverse mismatch", w.word);
            assert_eq!(v.inverse_checked, v.domain_points);
            runs += 1;
        }
    }
    pass(3, &format!("Ξ bijective with verified constructive inverse in {runs} configurations"));
}

/// Criterion 4: the twisted cases over F2 (χ = id) and F4 (χ = Frobenius).
#[test]
fn criterion_04_theorem_twisted() {
    let group = natural_group("A2").unwrap();
    let flip = DatumAutomorphism::new(&group.datum, vec![1, 0]).unwrap();
    let mut runs = 0;
    for (ring, frob) in [("Fq:2", None), ("Fq:4", Some(2))] {
        let c = ctx_for(&group, ring);
        let chi = match frob {
            None => RingMap::identity(c.ring.clone()),
            Some(q) => {
                RingMap::new(c.ring.clone(), c.ring.clone(), MapKind::Frobenius { q }).unwrap()
            }
        };
        for (class, w) in elliptic_configurations(&group, &flip) {
            let p = Problem::new(c.clone(), flip.clone(), chi.clone(), class, w.clone()).unwrap();
            let v = verify_theorem(&p).unwrap();
            assert!(v.bijective() && v.inverse_ok, "{ring} w={:?}", w.word);
            runs += 1;
        }
    }
    pass(4, &format!("twisted Ξ bijective for the diagram flip in {runs} configurations"));
}

/// Criterion 5: Ξ′∘Ξ = id and Ξ∘Ξ′ = id exhaustively; transported and
/// directly built inverses agree where both exist.
#[test]
fn criterion_05_inverse_fidelity() {
    let mut roundtrips = 0u64;
    for (t, ring) in untwisted_configs() {
        let group = natural_group(t).unwrap();
        let delta = DatumAutomorphism::identity(&group.datum);
        let c = ctx_for(&group, ring);
        for (_, w) in elliptic_configurations(&group, &delta) {
            let p = untwisted_problem(&c, &w);
            let inv = build_inverse(&p).unwrap();
            let u_table = c.u_table().unwrap();
            let z_table = c.z_table(&w.word).unwrap();
            for u in &u_table.elems {
                for z in &z_table.elems {
                    let g = xi_unchecked(&p, u, z);
                    let (iu, iz) = xi_inverse(&p, &inv, &g).unwrap();
                    assert!(&iu == u && &iz == z, "Ξ′∘Ξ ≠ id at {t}/{ring} w={:?}", w.word);
                    assert_eq!(xi_unchecked(&p, &iu, &iz), g, "Ξ∘Ξ′ ≠ id");
                    roundtrips += 1;
                }
            }
        }
    }
    // agreement of the transported inverse with a directly built one, for
    // classes with at least two minimal-length elements (F2 scale)
    let mut compared = 0;
    for t in ["A2", "A3", "B2", "G2"] {
        let group = natural_group(t).unwrap();
        let delta = DatumAutomorphism::identity(&group.datum);
        let c = ctx_for(&group, "Fq:2");
        for (class, w) in elliptic_configurations(&group, &delta) {
            if class.min_length.len() < 2 {
                continue;
            }
            let p = untwisted_problem(&c, &w);
            let transported = build_inverse(&p).unwrap();
            let Some(direct) = direct_inverse(&p) else { continue };
            if transported.transport.is_empty() {
                continue; // the two descriptors coincide
            }
            let u_table = c.u_table().unwrap();
            let z_table = c.z_table(&w.word).unwrap();
            for u in &u_table.elems {
                for z in &z_table.elems {
                    let g = xi_unchecked(&p, u, z);
                    let a = xi_inverse(&p, &transported, &g).unwrap();
                    let b = xi_inverse(&p, &direct, &g).unwrap();
                    assert!(a.0 == b.0 && a.1 == b.1, "{t} w={:?} disagree", w.word);
                }
            }
            compared += 1;
        }
    }
    pass(
        5,
        &format!("{roundtrips} two-sided roundtrips; transported = direct on {compared} elements"),
    );
}

/// A descriptor that uses w itself as the good element, when it is one.
fn direct_inverse(p: &Problem) -> Option<InverseDescriptor> {
    good_decomposition_of(p, &p.w)
}

/// Criterion 6: good elements exist in every elliptic class; the Coxeter
/// class of A2 decomposes as e = 3, y = (w_I, w_I).
#[test]
fn criterion_06_good_elements() {
    use xsection::braid::find_good_element;
    let mut classes_checked = 0;
    for t in ["A1", "A2", "A3", "B2", "G2"] {
        let group = natural_group(t).unwrap();
        let delta = DatumAutomorphism::identity(&group.datum);
        for class in delta_classes(&group, &delta) {
            if !class.elliptic {
                continue;
            }
            let (w, gd) = find_good_element(&group, &class).unwrap();
            assert_eq!(gd.factors[0], group.longest_element(), "{t} w={:?}", w.word);
            assert_eq!(
                gd.factors.iter().map(|f| f.length).sum::<usize>(),
                gd.e as usize * w.length
            );
            classes_checked += 1;
        }
    }
    let a2 = natural_group("A2").unwrap();
    let delta = DatumAutomorphism::identity(&a2.datum);
    let cox = delta_classes(&a2, &delta)
        .into_iter()
        .find(|c| c.elliptic && c.representative().length == 2)
        .unwrap();
    let (_, gd) = xsection::braid::find_good_element(&a2, &cox).unwrap();
    assert_eq!(gd.e, 3);
    assert_eq!(gd.factors, vec![a2.longest_element(), a2.longest_element()]);
    pass(6, &format!("good elements found in {classes_checked} elliptic classes; A2 gives e=3, (w_I, w_I)"));
}

/// Criterion 7: the 6×6 isotropy family for a non-minimal Coxeter element.
#[test]
fn criterion_07_nonminimal_isotropy() {
    let pz = Ring::parse("PolyZ:x").unwrap();
    let r = spaltenstein_demo(&pz).unwrap();
    assert!(r.identity_holds, "symbolic conjugation identity fails");
    let f2 = Ring::parse("Fq:2").unwrap();
    let r2 = spaltenstein_demo(&f2).unwrap();
    assert!(r2.identity_holds);
    let iso = r2.full_isotropy.unwrap();
    assert!(iso >= 2, "isotropy must be nontrivial");
    assert!(r2.orbit_size.unwrap() < r2.u_order.unwrap(), "the action must not be free");
    pass(7, &format!("u_x·yẇ·u_x⁻¹ = yẇ over ℤ[x]; isotropy {iso} ≥ 2 over F2"));
}

/// Criterion 8: the slice meets the unipotent variety once for Coxeter w.
#[test]
fn criterion_08_steinberg_slice() {
    let mut counted = 0;
    for (t, word, qs) in [
        ("A1", vec![0u8], vec!["Fq:2", "Fq:3", "Fq:4", "Fq:5"]),
        ("A2", vec![0, 1], vec!["Fq:2", "Fq:3", "Fq:4"]),
        ("A3", vec![0, 1, 2], vec!["Fq:2", "Fq:3"]),
    ] {
        let group = natural_group(t).unwrap();
        let w = group.from_word(&word).unwrap();
        for ring in qs {
            let c = ctx_for(&group, ring);
            let p = untwisted_problem(&c, &w);
            let r = sigma_unipotent_count(&p).unwrap();
            assert_eq!(r.unipotent_count, 1, "{t}/{ring}");
            assert_eq!(r.points as u64, c.ring.size().unwrap().pow(w.length as u32));
            counted += 1;
        }
    }
    pass(8, &format!("Σ(F_q) contains exactly one unipotent in {counted} configurations"));
}

/// Criterion 9: orbit counts and freeness.
#[test]
fn criterion_09_orbit_counts() {
    let mut runs = 0;
    for (t, ring) in untwisted_configs() {
        let group = natural_group(t).unwrap();
        let delta = DatumAutomorphism::identity(&group.datum);
        let c = ctx_for(&group, ring);
        for (_, w) in elliptic_configurations(&group, &delta) {
            let p = untwisted_problem(&c, &w);
            let r = orbit_count(&p).unwrap();
            assert_eq!(r.orbits, r.expected, "{t}/{ring} w={:?}", w.word);
            assert!(r.all_free, "{t}/{ring} w={:?} has a non-free orbit", w.word);
            runs += 1;
        }
    }
    pass(9, &format!("q^l(w) free orbits of size |U| in {runs} configurations"));
}

/// Criterion 10: T_w structure via Smith normal form.
#[test]
fn criterion_10_t_w() {
    let mut checked = 0;
    for t in ["A1", "A2", "A3", "B2", "G2"] {
        let group = natural_group(t).unwrap();
        let delta = DatumAutomorphism::identity(&group.datum);
        for class in delta_classes(&group, &delta) {
            if !class.elliptic {
                continue;
            }
            let orders: Vec<i64> = class
                .min_length
                .iter()
                .map(|w| t_w_invariants_of(&group, w, &delta).unwrap().order)
                .collect();
            assert!(orders.windows(2).all(|p| p[0] == p[1]), "{t}: order varies across C_min");
            checked += 1;
        }
    }
    let a1 = natural_group("A1").unwrap();
    let d1 = DatumAutomorphism::identity(&a1.datum);
    let tw = t_w_invariants_of(&a1, &a1.from_word(&[0]).unwrap(), &d1).unwrap();
    assert_eq!((tw.order, tw.factors.clone()), (2, vec![2]));
    let a2 = natural_group("A2").unwrap();
    let d2 = DatumAutomorphism::identity(&a2.datum);
    let tw = t_w_invariants_of(&a2, &a2.from_word(&[0, 1]).unwrap(), &d2).unwrap();
    assert_eq!((tw.order, tw.factors.clone()), (3, vec![3]));
    pass(10, &format!("T_w orders class-invariant over {checked} classes; A1 → 2, A2 → 3"));
}

/// Criterion 11: the symbolic layer for A1 and the A2 Coxeter element.
#[test]
fn criterion_11_symbolic() {
    let mut verified = Vec::new();
    for (t, word) in [("A1", vec![0u8]), ("A2", vec![0, 1])] {
        let group = natural_group(t).unwrap();
        let w = group.from_word(&word).unwrap();
        let f = xi_polymap(&group, &w).unwrap();
        let finv = xi_inverse_polymap(&group, &w).unwrap();
        assert!(is_unit_constant(&f.jacobian_det()), "{t}: jacobian of Ξ not ±1");
        assert!(is_unit_constant(&finv.jacobian_det()), "{t}: jacobian of Ξ′ not ±1");
        match PolyMap::verify_two_sided_inverse(&f, &finv) {
            Ok(ok) => {
                assert!(ok, "{t}: Ξ and Ξ′ are not two-sided inverses");
                verified.push(format!("{t} symbolically"));
            }
            Err(PolyFamError::MonomialCeiling(_)) => {
                // fall back to pointwise identity of the reductions
                for ring in ["Fq:2", "Fq:3", "Fq:5"] {
                    let r = Ring::parse(ring).unwrap();
                    let n = f.n_vars();
                    let elems = r.enumerate().unwrap();
                    let mut idx = vec![0usize; n];
                    loop {
                        let point: Vec<_> = idx.iter().map(|&i| elems[i].clone()).collect();
                        let fwd = f.evaluate(&r, &point);
                        assert_eq!(finv.evaluate(&r, &fwd), point, "{t}/{ring}");
                        let bwd = finv.evaluate(&r, &point);
                        assert_eq!(f.evaluate(&r, &bwd), point, "{t}/{ring}");
                        let mut pos = n;
                        let done = loop {
                            if pos == 0 {
                                break true;
                            }
                            pos -= 1;
                            idx[pos] += 1;
                            if idx[pos] < elems.len() {
                                break false;
                            }
                            idx[pos] = 0;
                        };
                        if done {
                            break;
                        }
                    }
                }
                verified.push(format!("{t} via F2/F3/F5 reductions"));
            }
            Err(e) => panic!("{t}: {e}"),
        }
    }
    pass(11, &format!("coordinate Ξ/Ξ′ inverse pairs with unit jacobians ({})", verified.join(", ")));
}

/// The α map (used by the orbit-space statements): injective always,
/// bijective onto U under the theorem's hypotheses.
#[test]
fn alpha_surjectivity_supplement() {
    for (t, ring) in [("A2", "Fq:2"), ("A2", "Fq:3"), ("A1", "Fq:3")] {
        let group = natural_group(t).unwrap();
        let delta = DatumAutomorphism::identity(&group.datum);
        let c = ctx_for(&group, ring);
        for (_, w) in elliptic_configurations(&group, &delta) {
            let p = untwisted_problem(&c, &w);
            let dinv = delta.inverse(&group.datum);
            let v = group.inverse(&group.twist(&w, &dinv));
            let vu = c.sub_table(&v, SubgroupKind::Wu).unwrap();
            let uw = c.sub_table(&w, SubgroupKind::Uw).unwrap();
            let mut images = std::collections::HashSet::new();
            for a in &vu.elems {
                for b in &uw.elems {
                    let out = alpha(&p, a, b).unwrap();
                    assert!(images.insert(out.mat), "α not injective at {t}/{ring}");
                }
            }
            assert_eq!(images.len(), c.u_table().unwrap().len(), "α not onto U at {t}/{ring}");
        }
    }
    println!("supplement PASS: α bijective onto U in the tested configurations");
}

/// Ξ(1, z) = z and the membership guards, pinned once.
#[test]
fn xi_basepoint_supplement() {
    let group = natural_group("A2").unwrap();
    let c = ctx_for(&group, "Fq:3");
    let w = group.from_word(&[0, 1]).unwrap();
    let p = untwisted_problem(&c, &w);
    let z_table = c.z_table(&w.word).unwrap();
    for z in &z_table.elems {
        assert_eq!(xi(&p, &c.one(), z).unwrap(), z.clone());
    }
    let not_in_cell = c.lift(&group.from_word(&[0]).unwrap());
    assert!(xi(&p, &c.one(), &not_in_cell).is_err());
    println!("supplement PASS: Ξ(1, z) = z and membership guards hold");
}
