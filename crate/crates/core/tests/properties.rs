use flowcomp::completion::{complete_flow, ChartHandle, Completion};
use flowcomp::expr::{parse_expression, parse_predicate, BinOp, Expression, Func, Predicate, Relop};
use flowcomp::geometry::TaggedPoint;
use flowcomp::integrator::{flow, FlowStatus};
use flowcomp::scenarios::builtin;
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Expression> {
    prop_oneof![
        (0.0f64..1e6).prop_map(Expression::Num),
        prop_oneof![Just(0.5), Just(1e-7), Just(3.0), Just(1e20)].prop_map(Expression::Num),
        (0usize..3).prop_map(Expression::Var),
        Just(Expression::Time),
    ]
}

fn expression() -> impl Strategy<Value = Expression> {
    leaf().prop_recursive(4, 32, 3, |inner| {
        let op = prop_oneof![
            Just(BinOp::Add),
            Just(BinOp::Sub),
            Just(BinOp::Mul),
            Just(BinOp::Div),
            Just(BinOp::Pow)
        ];
        let unary = prop_oneof![
            Just(Func::Sin),
            Just(Func::Cos),
            Just(Func::Exp),
            Just(Func::Log),
            Just(Func::Sqrt),
            Just(Func::Abs)
        ];
        let binary = prop_oneof![Just(Func::Atan2), Just(Func::Min), Just(Func::Max)];
        prop_oneof![
            inner.clone().prop_map(|e| Expression::Neg(Box::new(e))),
            (op, inner.clone(), inner.clone()).prop_map(|(o, a, b)| Expression::Binary(o, Box::new(a), Box::new(b))),
            (unary, inner.clone()).prop_map(|(f, a)| Expression::Call(f, vec![a])),
            (binary, inner.clone(), inner).prop_map(|(f, a, b)| Expression::Call(f, vec![a, b])),
        ]
    })
}

fn predicate() -> impl Strategy<Value = Predicate> {
    let relop = prop_oneof![
        Just(Relop::Lt),
        Just(Relop::Le),
        Just(Relop::Gt),
        Just(Relop::Ge),
        Just(Relop::Ne),
        Just(Relop::Eq)
    ];
    let atom = prop_oneof![
        any::<bool>().prop_map(Predicate::Const),
        (relop, expression(), expression()).prop_map(|(r, a, b)| Predicate::Compare(r, a, b)),
    ];
    atom.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|p| Predicate::Not(Box::new(p))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Predicate::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Predicate::Or(Box::new(a), Box::new(b))),
        ]
    })
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn expressions_round_trip_through_text(e in expression()) {
        let text = e.to_string();
        let back = parse_expression(&text).unwrap();
        prop_assert_eq!(back, e, "{}", text);
    }

    #[test]
    fn predicates_round_trip_through_text(p in predicate()) {
        let text = p.to_string();
        let back = parse_predicate(&text).unwrap();
        prop_assert_eq!(back, p, "{}", text);
    }

    #[test]
    fn tagged_points_round_trip(s in -1e6f64..1e6, x in prop::collection::vec(-1e6f64..1e6, 1..4)) {
        let p = TaggedPoint::new(s, x);
        prop_assert_eq!(p.to_string().parse::<TaggedPoint>().unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotation_group_law(x in -2.0f64..2.0, y in -2.0f64..2.0, s in -5.0f64..5.0, t in -5.0f64..5.0) {
        let sc = builtin("rotation2d").unwrap();
        let cfg = sc.config.completion.integrator;
        let a = flow(&sc.field, &[x, y], s, &cfg).unwrap();
        let b = flow(&sc.field, &a.last_state, t, &cfg).unwrap();
        let c = flow(&sc.field, &[x, y], s + t, &cfg).unwrap();
        prop_assert!(close(&b.last_state, &c.last_state, 1e-6));
        let back = flow(&sc.field, &a.last_state, -s, &cfg).unwrap();
        prop_assert!(close(&back.last_state, &[x, y], 1e-6));
    }

    #[test]
    fn oracle_agreement(idx in 0usize..5, x in -1.5f64..1.5, y in -1.5f64..1.5, t in -0.9f64..0.9) {
        let name = ["example2", "example3", "blowup1d", "rotation2d", "linear1d"][idx];
        let sc = builtin(name).unwrap();
        let x0: Vec<f64> = [x, y][..sc.field.dim()].to_vec();
        prop_assume!(sc.field.contains(&x0).unwrap());
        let out = flow(&sc.field, &x0, t, &sc.config.completion.integrator).unwrap();
        if out.status == FlowStatus::Completed {
            let exact = sc.field.oracle_at(&x0, t).unwrap().unwrap();
            prop_assert!(close(&out.last_state, &exact, 1e-6), "{name} {x0:?} {t}");
        }
    }

    #[test]
    fn transition_cocycle(x in -2.0f64..2.0, y in -2.0f64..2.0, q in -2.0f64..2.0, s in -2.0f64..2.0, r in -2.0f64..2.0) {
        let sc = builtin("example2").unwrap();
        prop_assume!(sc.field.contains(&[x, y]).unwrap());
        let c = Completion::new(&sc.field, sc.config.completion);
        let direct = c.transition(q, r, &[x, y]);
        let via = c.transition(q, s, &[x, y]).and_then(|m| c.transition(s, r, &m));
        if let (Ok(a), Ok(b)) = (direct, via) {
            prop_assert!(close(&a, &b, 1e-6));
        }
    }

    #[test]
    fn charts_intertwine_the_flows(x in -2.0f64..2.0, y in -2.0f64..2.0, s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let sc = builtin("example2").unwrap();
        prop_assume!(sc.field.contains(&[x, y]).unwrap());
        let c = Completion::new(&sc.field, sc.config.completion);
        let out = flow(&sc.field, &[x, y], t, &sc.config.completion.integrator).unwrap();
        prop_assume!(out.status == FlowStatus::Completed);
        let lhs = complete_flow(&c.embed(s, &[x, y]).unwrap(), t);
        let rhs = c.embed(s, &out.last_state).unwrap();
        prop_assert_eq!(c.same_point(&lhs, &rhs), Ok(true));
    }

    #[test]
    fn complete_flow_is_a_group_action(s in -1e6f64..1e6, t in -1e6f64..1e6, u in -1e6f64..1e6) {
        let sc = builtin("example2").unwrap();
        let c = Completion::new(&sc.field, sc.config.completion);
        let p = c.embed(s, &[1.0, 0.0]).unwrap();
        let a = complete_flow(&complete_flow(&p, t), u);
        let b = complete_flow(&p, t + u);
        prop_assert!((a.tag() - b.tag()).abs() <= 1e-9 * (1.0 + s.abs() + t.abs() + u.abs()));
        prop_assert_eq!(a.coords(), b.coords());
        prop_assert_eq!(complete_flow(&p, 0.0).tag(), s);
    }

    #[test]
    fn lift_is_equivariant(x in -2.0f64..2.0, y in -2.0f64..2.0, s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let sc = builtin("example3").unwrap();
        prop_assume!(sc.field.contains(&[x, y]).unwrap());
        let f = sc.morphism("inclusion").unwrap();
        let c = Completion::new(&sc.field, sc.config.completion);
        let p = c.embed(s, &[x, y]).unwrap();
        let lhs = c.lift_morphism(f, &complete_flow(&p, t), f64::INFINITY).unwrap();
        let base = c.lift_morphism(f, &p, f64::INFINITY).unwrap();
        let rhs = flow(&f.target, &base, t, &sc.config.completion.integrator).unwrap();
        prop_assert!(close(&lhs, &rhs.last_state, 1e-6));
    }

    #[test]
    fn rotation_points_all_lie_in_chart_zero(s in -20.0f64..20.0, x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let sc = builtin("rotation2d").unwrap();
        let c = Completion::new(&sc.field, sc.config.completion);
        let p = c.embed(s, &[x, y]).unwrap();
        let z = c.to_chart(&p, ChartHandle { s: 0.0 }).unwrap();
        let back = c.embed(0.0, &z).unwrap();
        prop_assert_eq!(c.same_point(&p, &back), Ok(true));
    }
}
