use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use proptest::prelude::*;
use sheafmodal::modal::{
    check_axioms, check_trust, check_trustworthy, eval_topological, fundamental_truth_check,
    parse, relation_of, topology_of, trust_instance, Formula, ModalError, Relation, TopoModel,
    Topology, TrustFlavor,
};

const AGENTS: [&str; 3] = ["a", "b", "c"];

fn arb_formula(agents: usize) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just(Formula::var("p")), Just(Formula::var("q"))];
    let names: Vec<String> = AGENTS[..agents].iter().map(|s| s.to_string()).collect();
    leaf.prop_recursive(3, 24, 2, move |inner| {
        let names = names.clone();
        let group = proptest::sample::subsequence(names.clone(), 1..=names.len());
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (proptest::sample::select(names), inner.clone()).prop_map(|(a, f)| Formula::know(a, f)),
            (group.clone(), inner.clone()).prop_map(|(g, f)| Formula::mutual(g, f)),
            (group, inner).prop_map(|(g, f)| Formula::distributed(g, f)),
        ]
    })
}

fn bits(n: usize, mask: u64) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for w in 0..n {
        s.set(w, mask >> w & 1 == 1);
    }
    s
}

fn closure(mut r: Relation) -> Relation {
    let n = r.len();
    for (w, s) in r.iter_mut().enumerate() {
        s.insert(w);
    }
    for k in 0..n {
        for i in 0..n {
            if r[i].contains(k) {
                let rk = r[k].clone();
                r[i].union_with(&rk);
            }
        }
    }
    r
}

fn arb_relation(n: usize) -> impl Strategy<Value = Relation> {
    proptest::collection::vec(any::<u64>(), n)
        .prop_map(move |rows| rows.into_iter().map(|m| bits(n, m & 0b11)).collect::<Vec<_>>())
        .prop_map(move |r: Relation| {
            // sparse random edges, rotated so they are not only to low worlds
            r.into_iter()
                .enumerate()
                .map(|(w, s)| {
                    let mut out = FixedBitSet::with_capacity(n);
                    for v in s.ones() {
                        out.insert((w + v + 1) % n);
                    }
                    out
                })
                .collect()
        })
}

fn build(n: usize, rels: Vec<Relation>, p: u64, q: u64, checked: bool) -> TopoModel {
    let worlds = (0..n).map(|w| format!("w{w}")).collect();
    let agents = AGENTS[..rels.len()].iter().map(|s| s.to_string()).collect();
    let mut val = BTreeMap::new();
    val.insert("p".to_string(), bits(n, p));
    val.insert("q".to_string(), bits(n, q));
    if checked {
        TopoModel::new(worlds, agents, rels, val).unwrap()
    } else {
        TopoModel::new_unchecked(worlds, agents, rels, val).unwrap()
    }
}

fn arb_s4_model() -> impl Strategy<Value = TopoModel> {
    (1usize..6, 1usize..4).prop_flat_map(|(n, k)| {
        (
            proptest::collection::vec(arb_relation(n).prop_map(closure), k),
            any::<u64>(),
            any::<u64>(),
        )
            .prop_map(move |(rels, p, q)| build(n, rels, p, q, true))
    })
}

fn arb_any_model() -> impl Strategy<Value = TopoModel> {
    (1usize..7, 1usize..3).prop_flat_map(|(n, k)| {
        (proptest::collection::vec(arb_relation(n), k), any::<u64>())
            .prop_map(move |(rels, p)| build(n, rels, p, 0, false))
    })
}

/// Brute force: the trust schema with `φ = p` must hold at every world for
/// every one of the `2^|Σ|` valuations of `p`.
fn trust_oracle(m: &TopoModel, g: &[&str], h: &[&str], flavor: TrustFlavor) -> bool {
    let n = m.world_count();
    let f = trust_instance(g, h, flavor, Formula::var("p"));
    (0..1u64 << n).all(|mask| {
        let mut val = BTreeMap::new();
        val.insert("p".to_string(), bits(n, mask));
        m.with_valuation(val).is_valid(&f).unwrap()
    })
}

fn trustworthy_oracle(m: &TopoModel, i: &str, j: &str) -> bool {
    let n = m.world_count();
    let p = Formula::var("p");
    let f = Formula::implies(Formula::know(i, Formula::know(j, p.clone())), Formula::know(j, p));
    (0..1u64 << n).all(|mask| {
        let mut val = BTreeMap::new();
        val.insert("p".to_string(), bits(n, mask));
        m.with_valuation(val).is_valid(&f).unwrap()
    })
}

fn groups(m: &TopoModel) -> Vec<Vec<&str>> {
    let a: Vec<&str> = m.agents().iter().map(String::as_str).collect();
    (1u32..(1 << a.len()))
        .map(|mask| a.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| *x).collect())
        .collect()
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(f in arb_formula(3)) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn relational_and_topological_semantics_agree(m in arb_s4_model(), f in arb_formula(3)) {
        prop_assume!(f.agents().iter().all(|a| m.agent_index(a).is_ok()));
        prop_assert_eq!(m.eval(&f).unwrap(), eval_topological(&m, &f).unwrap());
    }

    #[test]
    fn topology_round_trips(m in arb_s4_model()) {
        for r in m.relations() {
            let t = topology_of(r).unwrap();
            prop_assert_eq!(&relation_of(&t), r);
            let rebuilt = Topology::from_opens(m.world_count(), &t.opens()).unwrap();
            prop_assert_eq!(rebuilt, t);
        }
    }

    #[test]
    fn knowledge_hierarchy(m in arb_s4_model(), f in arb_formula(1)) {
        let all: Vec<&str> = m.agents().iter().map(String::as_str).collect();
        let phi = m.eval(&f).unwrap();
        let e = m.eval(&Formula::mutual(all.clone(), f.clone())).unwrap();
        let d = m.eval(&Formula::distributed(all.clone(), f.clone())).unwrap();
        prop_assert!(d.is_subset(&phi));
        for a in &all {
            let k = m.eval(&Formula::know(*a, f.clone())).unwrap();
            prop_assert!(e.is_subset(&k));
            prop_assert!(k.is_subset(&d));
        }
    }

    #[test]
    fn s4_models_validate_the_schemata(m in arb_s4_model()) {
        prop_assert!(check_axioms(&m, &["p", "q"], 2).unwrap().all_valid());
    }

    #[test]
    fn trust_is_vacuous_on_s4_models(m in arb_s4_model()) {
        let r = fundamental_truth_check(&m).unwrap();
        prop_assert!(r.trust_vacuous());
        prop_assert!(r.distributed_implies_truth());
        if r.distributed_is_identity {
            prop_assert_eq!(r.fundamental_truth, Some(true));
        }
    }

    #[test]
    fn relational_trust_matches_brute_force(m in arb_any_model()) {
        for g in groups(&m) {
            for h in groups(&m) {
                for flavor in [TrustFlavor::Mutual, TrustFlavor::Distributed] {
                    prop_assert_eq!(
                        check_trust(&m, &g, &h, flavor).unwrap(),
                        trust_oracle(&m, &g, &h, flavor)
                    );
                }
            }
        }
    }

    #[test]
    fn relational_trustworthiness_matches_brute_force(m in arb_any_model()) {
        for i in m.agents() {
            for j in m.agents() {
                match check_trustworthy(&m, i, j) {
                    Ok(v) => prop_assert_eq!(v, trustworthy_oracle(&m, i, j)),
                    Err(ModalError::TrustPreconditionFailed { .. }) => {
                        prop_assert!(!trust_oracle(&m, &[j], &[i], TrustFlavor::Distributed))
                    }
                    Err(e) => prop_assert!(false, "unexpected error {e}"),
                }
            }
        }
    }
}

#[test]
fn trust_oracle_agrees_on_twelve_worlds() {
    let n = 12;
    // a: successor on a ring without loops; b: identity; c: everything
    let ring: Relation = (0..n).map(|w| bits(n, 1 << ((w + 1) % n))).collect();
    let id: Relation = (0..n).map(|w| bits(n, 1 << w)).collect();
    let total: Relation = (0..n).map(|_| bits(n, (1 << n) - 1)).collect();
    let m = build(n, vec![ring, id, total], 0, 0, false);
    for g in groups(&m) {
        for h in groups(&m) {
            let flavor = TrustFlavor::Distributed;
            assert_eq!(check_trust(&m, &g, &h, flavor).unwrap(), trust_oracle(&m, &g, &h, flavor));
        }
    }
}

#[test]
fn discrete_and_total_agents_trust_each_other() {
    let m = TopoModel::from_pairs(
        &["u", "v"],
        &["i", "j"],
        &[
            ("i", vec![("u", "u"), ("v", "v")]),
            ("j", vec![("u", "u"), ("u", "v"), ("v", "u"), ("v", "v")]),
        ],
        &[],
        true,
    )
    .unwrap();
    for (g, h) in [("i", "j"), ("j", "i")] {
        for flavor in [TrustFlavor::Mutual, TrustFlavor::Distributed] {
            assert!(check_trust(&m, &[g], &[h], flavor).unwrap());
            assert!(trust_oracle(&m, &[g], &[h], flavor));
        }
    }
}

#[test]
fn three_world_chain_is_not_trustworthy() {
    // j: 0 → 1; i: 1 → 1, 2 → 2, nothing from 0
    let m = TopoModel::from_pairs(
        &["0", "1", "2"],
        &["i", "j"],
        &[("i", vec![("1", "1"), ("2", "2")]), ("j", vec![("0", "1")])],
        &[],
        false,
    )
    .unwrap();
    assert!(!check_trustworthy(&m, "i", "j").unwrap());
    assert!(!trustworthy_oracle(&m, "i", "j"));
}
