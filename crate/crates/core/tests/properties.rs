use fairsplit_core::linsolve::{solve, Solution};
use fairsplit_core::necklace::{build_flow_graph, cancel_cycles, search_continuous, Necklace, CONTINUOUS_PATTERN_BUDGET};
use fairsplit_core::pathsplit::{floor_ceil_identities, solve_pair_split, verify_pair_split};
use fairsplit_core::signkit::{compute_t, Lambda, SignVector};
use fairsplit_core::{ColoredPath, Rational};
use proptest::prelude::*;

/// Relabels colors by first occurrence so they are contiguous from 0.
fn canonical(colors: Vec<usize>) -> Vec<usize> {
    let mut map = Vec::new();
    colors
        .into_iter()
        .map(|c| match map.iter().position(|&x| x == c) {
            Some(i) => i,
            None => {
                map.push(c);
                map.len() - 1
            }
        })
        .collect()
}

fn colors(max_n: usize, max_m: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..max_m, 1..=max_n).prop_map(canonical)
}

fn sign_vector(n: usize) -> impl Strategy<Value = SignVector> {
    prop::collection::vec(0u8..3, n).prop_map(move |v| {
        let mut plus = 0;
        let mut minus = 0;
        for (i, s) in v.into_iter().enumerate() {
            match s {
                1 => plus |= 1 << i,
                2 => minus |= 1 << i,
                _ => {}
            }
        }
        SignVector::new(n, plus, minus).unwrap()
    })
}

proptest! {
    #[test]
    fn alt_is_symmetric_and_bounded(x in (1usize..=20).prop_flat_map(sign_vector)) {
        prop_assert_eq!(x.alt(), (-x).alt());
        prop_assert!(x.alt() <= x.support().count_ones() as usize);
        let text = x.to_string();
        prop_assert_eq!(text.parse::<SignVector>().unwrap(), x);
    }

    #[test]
    fn order_is_a_partial_order(
        (y, keep, extra) in (1usize..=16).prop_flat_map(|n| (sign_vector(n), any::<u64>(), sign_vector(n)))
    ) {
        let n = y.len();
        let x = SignVector::new(n, y.plus() & keep, y.minus() & keep).unwrap();
        // z agrees with y on its support and may add entries elsewhere
        let free = !y.support();
        let z = SignVector::new(n, y.plus() | (extra.plus() & free), y.minus() | (extra.minus() & free)).unwrap();
        prop_assert!(y.precedes(&y).unwrap());
        prop_assert!(x.precedes(&y).unwrap());
        prop_assert!(y.precedes(&z).unwrap());
        prop_assert!(x.precedes(&z).unwrap());
        if y.precedes(&x).unwrap() {
            prop_assert_eq!(x, y);
        }
        prop_assert!(x.alt() <= y.alt());
    }

    #[test]
    fn lambda_is_antipodal(c in colors(10, 4), xs in prop::collection::vec(any::<(u16, u16)>(), 20)) {
        let p = ColoredPath::new(c).unwrap();
        let n = p.len();
        let t = compute_t(&p).unwrap();
        let lambda = Lambda::new(&p, t);
        let full = (1u64 << n) - 1;
        for (a, b) in xs {
            let plus = a as u64 & full;
            let minus = b as u64 & full & !plus;
            let x = SignVector::new(n, plus, minus).unwrap();
            if x.is_zero() {
                continue;
            }
            let l = lambda.label(&x).unwrap();
            prop_assert_eq!(lambda.label(&-x).unwrap(), -l);
            prop_assert!(l.magnitude() as usize <= lambda.label_bound());
        }
    }

    #[test]
    fn pair_split_verifies(c in colors(30, 6)) {
        let p = ColoredPath::new(c).unwrap();
        let s = solve_pair_split(&p).unwrap();
        prop_assert!(verify_pair_split(&p, &s).is_ok());
    }

    #[test]
    fn continuous_search_and_cancellation(c in colors(7, 2), q in 2usize..=3) {
        let neck = Necklace::new(c, q).unwrap();
        let cont = search_continuous(&neck, CONTINUOUS_PATTERN_BUDGET).unwrap();
        prop_assert!(cont.is_fair(&neck));
        prop_assert!(cont.num_cuts() <= neck.cut_bound());
        let cancelled = cancel_cycles(&cont, &neck).unwrap();
        prop_assert!(cancelled.is_fair(&neck));
        prop_assert!(cancelled.num_cuts() <= cont.num_cuts());
        for j in 0..neck.num_colors() {
            let g = build_flow_graph(&cancelled, &neck, j).unwrap();
            prop_assert!(g.check_flow().is_ok());
            prop_assert!(g.is_forest());
        }
    }

    #[test]
    fn floor_and_ceil_compose(a in -1_000_000i64..=1_000_000, b in 1i64..=1000, c in 1i64..=1000) {
        prop_assert_eq!(floor_ceil_identities(a, b, c).unwrap(), (true, true));
    }

    #[test]
    fn rational_json_round_trip(num in -10_000i64..=10_000, den in 1i64..=10_000) {
        #[derive(serde::Serialize, serde::Deserialize)]
        struct Holder(#[serde(with = "fairsplit_core::rational")] Rational);
        let r = Rational::new(num, den);
        let text = serde_json::to_string(&Holder(r)).unwrap();
        let back: Holder = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.0, r);
    }

    #[test]
    fn linear_solve_recovers_solution(
        size in 1usize..=4,
        entries in prop::collection::vec(-5i64..=5, 16),
        xs in prop::collection::vec((-20i64..=20, 1i64..=6), 4),
    ) {
        let a: Vec<Vec<Rational>> = (0..size)
            .map(|i| (0..size).map(|k| Rational::from_integer(entries[i * 4 + k])).collect())
            .collect();
        let x: Vec<Rational> = xs[..size].iter().map(|&(n, d)| Rational::new(n, d)).collect();
        let b: Vec<Rational> = a.iter().map(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum()).collect();
        match solve(a, b) {
            Solution::Unique(got) => prop_assert_eq!(got, x),
            Solution::Underdetermined => {}
            Solution::Inconsistent => prop_assert!(false, "a consistent system was reported inconsistent"),
        }
    }
}
