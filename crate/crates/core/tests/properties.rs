use proptest::prelude::*;

use chevcheck::chevrep::{cached_rep, RootRef};
use chevcheck::exactalg::{ExtField, Field, Poly, PolyMatrix, PrimeField, A, B, X};
use chevcheck::existence::{burnside_irreducible, y_generators, DiagonalA1Spec};
use chevcheck::rootdata::GroupId;

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn poly(p: u64, terms: &[(u64, u8, u8, u8)]) -> Poly {
    let f = PrimeField::new(p).unwrap();
    let mut acc = Poly::zero(f);
    for &(c, ex, ea, eb) in terms {
        let m = Poly::monomial(f, c % p, &[(X, ex as u64), (A, ea as u64), (B, eb as u64)]).unwrap();
        acc = acc.add(&m);
    }
    acc
}

fn terms() -> impl Strategy<Value = Vec<(u64, u8, u8, u8)>> {
    prop::collection::vec((0u64..50, 0u8..4, 0u8..3, 0u8..3), 0..5)
}

proptest! {
    #[test]
    fn ring_axioms(pi in 0usize..4, a in terms(), b in terms(), c in terms()) {
        let p = PRIMES[pi];
        let (a, b, c) = (poly(p, &a), poly(p, &b), poly(p, &c));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c)).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()));
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn frobenius_is_additive(pi in 0usize..4, a in terms(), b in terms()) {
        let p = PRIMES[pi];
        let (a, b) = (poly(p, &a), poly(p, &b));
        prop_assert_eq!(a.add(&b).pow(p).unwrap(), a.pow(p).unwrap().add(&b.pow(p).unwrap()));
    }

    #[test]
    fn substitution_is_a_homomorphism(pi in 0usize..4, a in terms(), b in terms(), q in terms()) {
        let p = PRIMES[pi];
        let (a, b, q) = (poly(p, &a), poly(p, &b), poly(p, &q));
        let s = |x: &Poly| x.substitute(X, &q).unwrap();
        prop_assert_eq!(s(&a.mul(&b).unwrap()), s(&a).mul(&s(&b)).unwrap());
        prop_assert_eq!(s(&a.add(&b)), s(&a).add(&s(&b)));
    }

    #[test]
    fn matrix_product_is_associative(pi in 0usize..4, e in prop::collection::vec(terms(), 12)) {
        let p = PRIMES[pi];
        let f = PrimeField::new(p).unwrap();
        let mk = |off: usize| {
            let mut m = PolyMatrix::zero(f, 2, 2);
            for i in 0..4 {
                m.set(i / 2, i % 2, poly(p, &e[off + i]));
            }
            m
        };
        let (a, b, c) = (mk(0), mk(4), mk(8));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn pairing_is_bilinear(gi in 0usize..3, w in (-5i64..5, -5i64..5), v in (-5i64..5, -5i64..5), t in (-5i64..5, -5i64..5)) {
        let d = GroupId::ALL[gi].datum();
        let (w, v, t) = ([w.0, w.1], [v.0, v.1], [t.0, t.1]);
        prop_assert_eq!(d.pairing([w[0] + v[0], w[1] + v[1]], t), d.pairing(w, t) + d.pairing(v, t));
    }

    #[test]
    fn root_elements_have_determinant_one(pi in 0usize..4, mi in 0usize..4) {
        let (g, m) = [(GroupId::Sl3, "natural"), (GroupId::Sp4, "V2"), (GroupId::Sp4, "V1"), (GroupId::G2, "V")][mi];
        let rep = cached_rep(g, m, PrimeField::new(PRIMES[pi]).unwrap()).unwrap();
        let n = rep.datum().num_positive();
        for r in (0..n).map(RootRef::Pos).chain((0..n).map(RootRef::Neg)) {
            prop_assert!(rep.action(r).determinant().unwrap().is_one());
        }
    }
}

#[test]
fn simple_coroots_pair_to_two() {
    for g in GroupId::ALL {
        let d = g.datum();
        assert_eq!(d.pair_root([1, 0], d.coroot([1, 0])), 2);
        assert_eq!(d.pair_root([0, 1], d.coroot([0, 1])), 2);
    }
}

#[test]
fn weyl_action_inverts() {
    for g in GroupId::ALL {
        let d = g.datum();
        for w in d.weyl_group() {
            for r in d.all_roots() {
                assert_eq!(w.apply(&d, w.inverse().apply(&d, r)), r);
            }
        }
    }
}

#[test]
fn span_dimension_is_monotone() {
    let spec = DiagonalA1Spec::new(GroupId::G2, 3, 3).unwrap();
    let (ext, gens) = y_generators(&spec).unwrap();
    let mut last = 0;
    for k in 1..=gens.len() {
        let r = burnside_irreducible(&ext, &gens[..k], 1_000_000).unwrap();
        assert!(r.dim >= last);
        last = r.dim;
    }
    assert_eq!(last, 49);
}

#[test]
fn extension_field_has_inverses() {
    let f = ExtField::new(PrimeField::new(3).unwrap(), 2);
    for a in f.elements().skip(1) {
        assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
    }
}
