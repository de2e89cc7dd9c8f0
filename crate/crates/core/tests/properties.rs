use proptest::prelude::*;

use sturmlab::factors::{factor_table, is_balanced, richness_in};
use sturmlab::WordSpec;

/// Directive words d = d1,...,dk,(1)* with small heads.
fn sturmian_spec() -> impl Strategy<Value = WordSpec> {
    prop::collection::vec(1u32..5, 0..4).prop_map(|head| {
        let mut text = String::from("sturmian:d=");
        for d in &head {
            text.push_str(&format!("{d},"));
        }
        text.push_str("(1)*");
        WordSpec::parse(&text).unwrap()
    })
}

fn mech_spec() -> impl Strategy<Value = WordSpec> {
    (1u32..5, prop::collection::vec(1u32..4, 1..3), 0u32..5).prop_map(|(a1, tail, p)| {
        let tail: Vec<String> = tail.iter().map(u32::to_string).collect();
        let text = format!("mech:cf=[0;{a1},({})],rho={p}/5", tail.join(","));
        WordSpec::parse(&text).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn prefixes_are_monotone(spec in sturmian_spec(), n in 1usize..400, m in 1usize..400) {
        let (short, long) = (n.min(m), n.max(m));
        let a = spec.prefix(short).unwrap();
        let fresh = WordSpec::parse(&spec.to_string()).unwrap();
        let b = fresh.prefix(long).unwrap();
        prop_assert_eq!(&b[..short], &a[..]);
    }

    #[test]
    fn sturmian_prefixes_are_balanced(spec in sturmian_spec()) {
        prop_assert!(is_balanced(&spec.prefix(300).unwrap()).balanced);
    }

    #[test]
    fn mechanical_complexity(spec in mech_spec(), m in 1usize..40) {
        prop_assert_eq!(factor_table(&spec, m).unwrap().len(), m + 1);
    }

    #[test]
    fn richness_is_reversal_invariant(spec in mech_spec(), m in 1usize..30) {
        let t = factor_table(&spec, m).unwrap();
        for f in t.words() {
            let r = richness_in(&t, f).unwrap().letter;
            prop_assert_eq!(richness_in(&t, &f.reversed()).unwrap().letter, r);
        }
    }
}
