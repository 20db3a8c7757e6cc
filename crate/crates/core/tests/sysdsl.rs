use fracwin::solver::VectorField;
use fracwin::sysdsl::{parse_expr, parse_system, BinOp, Expr, ExprField, Func};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0.0..100.0f64).prop_map(Expr::Num),
        prop_oneof![Just(0.5), Just(1e-7), Just(3.0), Just(1e20)].prop_map(Expr::Num),
        (1usize..=3).prop_map(Expr::Var),
        Just(Expr::Time),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(6, 64, 2, |inner| {
        let op = prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)];
        let func = prop_oneof![Just(Func::Sin), Just(Func::Cos), Just(Func::Exp), Just(Func::Abs)];
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (op, inner.clone(), inner.clone()).prop_map(|(o, a, b)| Expr::Binary(o, Box::new(a), Box::new(b))),
            (inner.clone(), prop_oneof![Just(2.0), Just(3.0), Just(-1.0), Just(0.5), Just(-2.5)])
                .prop_map(|(e, p)| Expr::Pow(Box::new(e), p)),
            (func, inner).prop_map(|(f, e)| Expr::Call(f, Box::new(e))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, ..ProptestConfig::default() })]

    #[test]
    fn print_parse_print_is_a_fixed_point(e in expr()) {
        let once = e.to_string();
        let parsed = parse_expr(&once, 3).unwrap();
        prop_assert_eq!(parsed.to_string(), once);
    }

    #[test]
    fn reparsed_expressions_evaluate_identically(e in expr(), x in prop::array::uniform3(-3.0..3.0f64), t in 0.0..10.0f64) {
        let parsed = parse_expr(&e.to_string(), 3).unwrap();
        match (e.eval(&x, t), parsed.eval(&x, t)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.to_bits(), b.to_bits()),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }
}

#[test]
fn fuzzed_input_never_panics() {
    const PIECES: [&str; 20] = [
        "x1", "x2", "x9", "t", "sin", "cos(", "exp", "abs", "(", ")", "+", "-", "*", "/", "^", ",", "1.5",
        "2e3", " ", "\n",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut parsed = 0;
    for i in 0..10_000 {
        let src = if i % 2 == 0 {
            let len = rng.gen_range(0..40);
            let bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
            String::from_utf8_lossy(&bytes).into_owned()
        } else {
            let len = rng.gen_range(0..30);
            (0..len).map(|_| PIECES[rng.gen_range(0..PIECES.len())]).collect()
        };
        match parse_expr(&src, 2) {
            Ok(e) => {
                parsed += 1;
                let _ = e.eval(&[0.3, -1.2], 0.5);
                assert_eq!(parse_expr(&e.to_string(), 2).unwrap(), parse_expr(&e.to_string(), 2).unwrap());
            }
            Err(err) => {
                assert!(err.pos.line >= 1 && err.pos.column >= 1);
                assert!(!err.to_string().is_empty());
            }
        }
        let _ = parse_system(&src);
    }
    assert!(parsed > 0);
}

#[test]
fn spec_evaluations() {
    let at = |src: &str, x: [f64; 2]| parse_expr(src, 2).unwrap().eval(&x, 0.0).unwrap();
    assert_eq!(at("-x1 - x2", [3.0, -5.0]), 2.0);
    assert_eq!(at("3*x1^2 + 2*x1*x2 + 2*x2^2", [7.0, -3.0]), 123.0);
    assert_eq!(at("x2^3", [0.0, -5.0]), -125.0);
    assert_eq!(at("2+3*4", [0.0, 0.0]), 14.0);
    assert_eq!(at("2*3^2", [0.0, 0.0]), 18.0);
    assert_eq!(at("-2^2", [0.0, 0.0]), -4.0);
}

#[test]
fn agrees_with_hand_coded_fields() {
    let example1 = ExprField::new(vec![parse_expr("-x1", 1).unwrap()]).unwrap();
    let example2 = ExprField::new(vec![parse_expr("-x1 + x2", 2).unwrap(), parse_expr("-x1 - 2*x2", 2).unwrap()])
        .unwrap();
    let example3 =
        ExprField::new(vec![parse_expr("-x1 + x2^3", 2).unwrap(), parse_expr("-x1 - x2", 2).unwrap()]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let x = [rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)];
        let t = rng.gen_range(0.0..50.0);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-15 * b.abs().max(1.0);
        assert!(close(example1.eval_vec(&x[..1], t).unwrap()[0], -x[0]));
        let f2 = example2.eval_vec(&x, t).unwrap();
        assert!(close(f2[0], -x[0] + x[1]) && close(f2[1], -x[0] - 2.0 * x[1]));
        let f3 = example3.eval_vec(&x, t).unwrap();
        assert!(close(f3[0], -x[0] + x[1].powi(3)) && close(f3[1], -x[0] - x[1]));
    }
}

#[test]
fn example3_document_round_trip() {
    let sys = parse_system("f1 = -x1 + x2^3\nf2 = -x1 - x2\n").unwrap();
    let printed: Vec<String> = sys.components.iter().map(|e| e.to_string()).collect();
    assert_eq!(printed, vec!["-x1 + x2^3", "-x1 - x2"]);
    let doc: String = printed.iter().enumerate().map(|(i, s)| format!("f{} = {s}\n", i + 1)).collect();
    assert_eq!(parse_system(&doc).unwrap().components, sys.components);
}
