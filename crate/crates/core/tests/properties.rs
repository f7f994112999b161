use proptest::prelude::*;

use kframe::cli::ast::{Document, Expr, FieldSpec, Request, SymbolExpr};
use kframe::cli::parse;
use kframe::field::{Field, FiniteField, Poly, RatFunc, RationalFunctionField};
use kframe::framed::{rho, FramedDatum};
use kframe::framing::{apply_transvections, reduce_to_projection, Matrix};
use kframe::milnor::{canonical, tame_symbol, CanonicalForm, MilnorElement, Place};

fn field(q: u64) -> FiniteField {
    match q {
        9 => FiniteField::with_degree(3, 2, "a").unwrap(),
        _ => FiniteField::prime(q).unwrap(),
    }
}

fn class<F: kframe::milnor::Canonicalize>(a: &MilnorElement<F>) -> CanonicalForm {
    canonical(a).unwrap()
}

fn sym(k: &FiniteField, e: Vec<u64>) -> MilnorElement<FiniteField> {
    MilnorElement::symbol(k, e).unwrap()
}

fn poly_strategy(q: u64, max_deg: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..q, 1..=max_deg + 1)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn symbols_are_multiplicative_in_each_slot(q in prop::sample::select(vec![5u64, 7, 9, 11]), a in 1u64..121, b in 1u64..121, c in 1u64..121) {
        let k = field(q);
        let (a, b, c) = (a % (q - 1) + 1, b % (q - 1) + 1, c % (q - 1) + 1);
        let lhs = sym(&k, vec![k.mul(&a, &b)]);
        let rhs = sym(&k, vec![a]).add(&sym(&k, vec![b])).unwrap();
        prop_assert_eq!(class(&lhs), class(&rhs));
        let lhs = sym(&k, vec![k.mul(&a, &b), c]);
        let rhs = sym(&k, vec![a, c]).add(&sym(&k, vec![b, c])).unwrap();
        prop_assert_eq!(class(&lhs), class(&rhs));
    }

    #[test]
    fn swapping_entries_negates_over_function_field(
        q in prop::sample::select(vec![3u64, 5, 7]),
        f in poly_strategy(7, 3),
        g in poly_strategy(7, 3),
    ) {
        let k = field(q);
        let kt = RationalFunctionField::new(k.clone(), "t");
        let to = |c: &[u64]| RatFunc::from_poly(Poly::new(&k, c.iter().map(|x| x % q).collect()));
        let (f, g) = (to(&f), to(&g));
        prop_assume!(!f.is_zero() && !g.is_zero());
        let ab = MilnorElement::symbol(&kt, vec![f.clone(), g.clone()]).unwrap();
        let ba = MilnorElement::symbol(&kt, vec![g, f]).unwrap();
        prop_assert!(class(&ab.add(&ba).unwrap()).is_zero());
    }

    #[test]
    fn tame_symbol_is_additive(
        q in prop::sample::select(vec![5u64, 7]),
        f in poly_strategy(7, 3),
        g in poly_strategy(7, 3),
        h in poly_strategy(7, 3),
        root in 0u64..7,
    ) {
        let k = field(q);
        let kt = RationalFunctionField::new(k.clone(), "t");
        let to = |c: &[u64]| RatFunc::from_poly(Poly::new(&k, c.iter().map(|x| x % q).collect()));
        let (f, g, h) = (to(&f), to(&g), to(&h));
        prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
        let place = Place::Finite(Poly::linear(&k, &(root % q)));
        let s = |a: &RatFunc<FiniteField>, b: &RatFunc<FiniteField>| {
            MilnorElement::symbol(&kt, vec![a.clone(), b.clone()]).unwrap()
        };
        let whole = tame_symbol(&s(&f, &g.mul(&h)), &place).unwrap();
        let parts = tame_symbol(&s(&f, &g).add(&s(&f, &h)).unwrap(), &place).unwrap();
        prop_assert_eq!(class(&whole), class(&parts));
        for p in [Place::Infinity, place] {
            let sum = tame_symbol(&s(&f, &g).add(&s(&g, &f)).unwrap(), &p).unwrap();
            prop_assert!(class(&sum).is_zero());
        }
    }

    #[test]
    fn rho_is_additive_on_coprime_framings(
        q in prop::sample::select(vec![5u64, 7, 9]),
        f1 in poly_strategy(9, 3),
        f2 in poly_strategy(9, 3),
        g in poly_strategy(9, 2),
        unit in 1u64..9,
    ) {
        let k = field(q);
        let p = |c: &[u64]| Poly::new(&k, c.iter().map(|x| x % q).collect());
        let (f1, f2, g) = (p(&f1), p(&f2), RatFunc::from_poly(p(&g)));
        prop_assume!(!f1.is_zero() && !f2.is_zero() && !g.is_zero());
        prop_assume!(f1.gcd(&f2).deg() == 0);
        let rho_of = |f: Poly<FiniteField>| FramedDatum::new(f, vec![g.clone()]).ok().map(|d| rho(&d).unwrap());
        let (Some(r1), Some(r2), Some(r12)) = (rho_of(f1.clone()), rho_of(f2.clone()), rho_of(f1.mul(&f2))) else {
            return Ok(());
        };
        let to_elem = |c: CanonicalForm| match c {
            CanonicalForm::Finite(c) => c.to_element().unwrap(),
            CanonicalForm::Function(_) => unreachable!(),
        };
        let sum = to_elem(r1).add(&to_elem(r2)).unwrap();
        prop_assert_eq!(class(&sum), r12.clone());
        let u = unit % (q - 1) + 1;
        prop_assert_eq!(rho_of(f1.mul(&f2).scale(&u)).unwrap(), r12);
    }

    #[test]
    fn reduction_reaches_the_projection(
        q in prop::sample::select(vec![2u64, 3, 5, 7]),
        n in 1usize..4,
        extra in 0usize..4,
        seed in prop::collection::vec(0u64..7, 28),
    ) {
        let k = field(q);
        let cols = n + extra;
        let rows: Vec<Vec<u64>> = (0..n).map(|i| (0..cols).map(|j| seed[(i * cols + j) % 28] % q).collect()).collect();
        let a = Matrix::from_rows(&k, rows).unwrap();
        prop_assume!(a.rank() == n);
        match reduce_to_projection(&a) {
            Ok(ops) => {
                prop_assert!(apply_transvections(&a, &ops).is_projection());
                prop_assert!(ops.len() <= n * (cols + 1));
            }
            Err(_) => prop_assert!(extra == 0 && !k.is_one(&a.determinant().unwrap())),
        }
    }
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u64..20).prop_map(Expr::Int),
        prop::sample::select(vec!["t", "y"]).prop_map(|v| Expr::Var(v.into()))
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner, -3i64..4).prop_map(|(a, e)| Expr::Pow(Box::new(a), e)),
        ]
    })
}

proptest! {
    #[test]
    fn parse_inverts_render(
        terms in prop::collection::vec((-3i64..4, prop::collection::vec(expr_strategy(), 2)), 1..4),
        modulus in expr_strategy(),
    ) {
        let doc = Document {
            field: FieldSpec { order: 9, function_var: Some("t".into()), modulus: Some(modulus) },
            request: Request::Normalize(SymbolExpr { terms }),
        };
        let text = doc.to_string();
        let parsed = parse(&text).unwrap();
        prop_assert_eq!(&parsed, &doc);
        prop_assert_eq!(parsed.to_string(), text);
    }
}
