use std::sync::Arc;
use xsection::chevalley::Context;
use xsection::crosssec::*;
use xsection::rings::{Ring, RingMap};
use xsection::rootdata::DatumAutomorphism;
use xsection::weyl::delta_classes;

fn main() {
    let group = natural_group("A2").unwrap();
    let ring = Ring::parse("Fq:2").unwrap();
    let ctx = Arc::new(Context::natural(group.clone(), ring.clone()).unwrap());
    let delta = DatumAutomorphism::identity(&group.datum);
    let chi = RingMap::identity(ring.clone());
    let w = group.from_word(&[1, 0]).unwrap();           // w_h = y·x = s2 s1
    let x = group.from_word(&[0]).unwrap();              // x = s1
    let y = group.from_word(&[1]).unwrap();              // y = s2
    let wto = group.from_word(&[0, 1]).unwrap();         // x δ(y) = s1 s2 (good)
    let class = delta_classes(&group, &delta).into_iter().find(|c| c.contains(&w)).unwrap();
    let p = Problem::new(ctx.clone(), delta.clone(), chi.clone(), class.clone(), w.clone()).unwrap();
    // deep inverter at the good element s1 s2
    let class2 = delta_classes(&group, &delta).into_iter().find(|c| c.contains(&wto)).unwrap();
    let p2 = Problem::new(ctx.clone(), delta, chi, class2, wto.clone()).unwrap();
    let inv2 = build_inverse(&p2).unwrap();
    assert_eq!(inv2.transport.len(), 0);

    // failing point: u = coords [0,0,1], z = coords [0,0]
    let u0 = ctx.param_u(&[ring.zero(), ring.zero(), ring.one()]);
    let z0 = ctx.param_zw_word(&w.word, &[ring.zero(), ring.zero()]);
    let g = xi_unchecked(&p, &u0, &z0);

    // --- backward step by hand ---
    let (zh, _, u2, _) = ctx.split_cell(&w, &g).unwrap();
    // split zh in U^{yx}(ẏẋ) into ga ∈ U^y ẏ, gp ∈ U^x ẋ
    let lx = ctx.lift(&x);
    let t = ctx.mul(&zh, &ctx.invert(&lx));
    let (ga, _, uu, _) = ctx.split_cell(&y, &t).unwrap();
    let gp = ctx.mul(&uu, &lx);
    println!("zh == ga*gp: {}", ctx.mul(&ga, &gp) == zh);
    let zp = ctx.mul(&gp, &u2);
    // Z'(c,d) with (c,d) = iota'(z,z') = (zp, pi(ga)) = (zp, ga)   [pi = id]
    let cd = ctx.mul(&zp, &ga);
    let (u, g2full) = xi_inverse(&p2, &inv2, &cd).unwrap();
    println!("check deep section: xi_{{s1s2}}(u, g2full) == cd: {}", xi_unchecked(&p2, &u, &g2full) == cd);
    // split g2full into g2 ∈ U^x ẋ, g2p ∈ U^{δy} δẏ
    let ldy = ctx.lift(&y);
    let t2 = ctx.mul(&g2full, &ctx.invert(&ldy));
    let (g2, _, uu2, _) = ctx.split_cell(&x, &t2).unwrap();
    let g2p = ctx.mul(&uu2, &ldy);
    println!("g2full == g2*g2p: {}", ctx.mul(&g2, &g2p) == g2full);
    let (_, _, uprime, _) = ctx.split_cell(&x, &ctx.mul(&u, &g2)).unwrap();
    // candidate answer
    let iu = uprime.clone();          // pi_inv = id
    let iz = ctx.mul(&g2p, &g2);      // pi_inv(g2p)*g2
    let gg = xi_unchecked(&p, &iu, &iz);
    println!("xi(iu, iz) == g: {}", gg == g);
    println!("iz in z-cell of w: {:?}", ctx.zw_coords(&w.word, &iz).is_ok());
    // check Theta(Z(z,z')) == (z, z') componentwise:
    // Theta(u,u',g,g') = (u g u'^-1, u' g' pi(u)^-1) for pair (y, x)
    // Z(z,z') = (pi^-1(u'), u, pi^-1(g2p), g2) = (uprime, u, g2p, g2)
    let th1 = ctx.mul(&ctx.mul(&uprime, &g2p), &ctx.invert(&u));
    let th2 = ctx.mul(&ctx.mul(&u, &g2), &ctx.invert(&uprime));
    println!("Theta1 == z (= ga): {}", th1 == ga);
    println!("Theta2 == z' (= zp): {}", th2 == zp);
}
