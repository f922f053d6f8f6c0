//! Property tests: metric axioms, flow against enumeration, exact search
//! invariances.

use ldcb_core::election::{AlternativeSet, Preference, Profile, VotingRule};
use ldcb_core::flow::{check_flow, max_flow, min_cost_flow_with_demands, FlowNetwork};
use ldcb_core::instance::BriberyInstance;
use ldcb_core::metrics::{distance, Metric};
use ldcb_core::oracle::{solve_exhaustive, OracleBudget};
use proptest::prelude::*;

fn perm(m: usize) -> impl Strategy<Value = Preference> {
    Just((0..m).collect::<Vec<_>>()).prop_shuffle().prop_map(|o| Preference::new(o).unwrap())
}

fn metric() -> impl Strategy<Value = Metric> {
    prop::sample::select(Metric::ALL.to_vec())
}

fn rule() -> impl Strategy<Value = VotingRule> {
    prop::sample::select(vec![
        VotingRule::Plurality,
        VotingRule::Veto,
        VotingRule::KApproval(2),
        VotingRule::Borda,
        VotingRule::Maximin,
        VotingRule::Copeland(ldcb_core::Ratio::new(1, 2).unwrap()),
        VotingRule::Bucklin,
        VotingRule::SimplifiedBucklin,
    ])
}

fn instance() -> impl Strategy<Value = BriberyInstance> {
    (3usize..=4, 2usize..=4).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(perm(m), n),
            0..m,
            prop::collection::vec(0u64..=2, n),
            prop::collection::vec(0u64..=2, n),
            0u64..=3,
            rule(),
            metric(),
        )
            .prop_map(move |(prefs, target, deltas, prices, budget, rule, metric)| BriberyInstance {
                profile: Profile::new(AlternativeSet::letters(m), prefs).unwrap(),
                target,
                deltas,
                prices,
                budget,
                rule,
                metric,
            })
    })
}

fn relabel(p: &Preference, sigma: &[usize]) -> Preference {
    Preference::new(p.order().iter().map(|&a| sigma[a]).collect()).unwrap()
}

fn decide(inst: &BriberyInstance, prune: bool) -> Option<u64> {
    let budget = OracleBudget { prune, ..OracleBudget::default() };
    solve_exhaustive(inst, &budget).unwrap().cost()
}

/// Every integral flow with each edge in `[lb, cap]`, brute force.
fn enumerate_flows(net: &FlowNetwork, value: i64) -> Vec<(Vec<i64>, i64)> {
    let edges = net.edges();
    let mut out = Vec::new();
    let mut cur: Vec<i64> = edges.iter().map(|e| e.lb).collect();
    loop {
        if let Ok(c) = check_flow(net, value, &cur) {
            out.push((cur.clone(), c));
        }
        let mut i = 0;
        loop {
            if i == edges.len() {
                return out;
            }
            if cur[i] < edges[i].cap {
                cur[i] += 1;
                break;
            }
            cur[i] = edges[i].lb;
            i += 1;
        }
    }
}

fn network() -> impl Strategy<Value = FlowNetwork> {
    (3usize..=4).prop_flat_map(|nodes| {
        prop::collection::vec((0..nodes, 0..nodes, 0i64..=1, 0i64..=2, 0i64..=3), 1..=6).prop_map(move |es| {
            let mut net = FlowNetwork::new(nodes, 0, nodes - 1);
            for (u, v, lb, extra, cost) in es {
                if u != v {
                    net.add_edge(u, v, lb, lb + extra, cost);
                }
            }
            net
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn metric_axioms((p, q, r, metric) in (1usize..=7, metric()).prop_flat_map(|(m, x)| (perm(m), perm(m), perm(m), Just(x)))) {
        let d = |a: &Preference, b: &Preference| distance(metric, a, b).unwrap();
        prop_assert_eq!(d(&p, &p), 0);
        prop_assert_eq!(d(&p, &q), d(&q, &p));
        prop_assert!(d(&p, &r) <= d(&p, &q) + d(&q, &r));
        if p != q {
            prop_assert!(d(&p, &q) > 0);
        }
    }

    #[test]
    fn metric_relations(p in perm(6), q in perm(6)) {
        let sw = distance(Metric::Swap, &p, &q).unwrap();
        let fr = distance(Metric::Footrule, &p, &q).unwrap();
        let md = distance(Metric::MaxDisplacement, &p, &q).unwrap();
        // Diaconis-Graham
        prop_assert!(sw <= fr && fr <= 2 * sw);
        prop_assert!(md <= sw);
        prop_assert_eq!(fr % 2, 0);
    }

    #[test]
    fn flow_matches_enumeration(net in network(), value in 0i64..=3) {
        let all = enumerate_flows(&net, value);
        let got = min_cost_flow_with_demands(&net, value).unwrap();
        prop_assert_eq!(got.feasible, !all.is_empty());
        if got.feasible {
            let best = all.iter().map(|(_, c)| *c).min().unwrap();
            prop_assert_eq!(got.cost, best);
            prop_assert_eq!(check_flow(&net, value, &got.flow).unwrap(), best);
        }
        if net.edges().iter().all(|e| e.lb == 0) {
            let max = (0..=18).filter(|&v| !enumerate_flows(&net, v).is_empty()).max().unwrap();
            prop_assert_eq!(max_flow(&net).unwrap(), max);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn oracle_ignores_voter_order(inst in instance(), rot in 0usize..4) {
        let mut other = inst.clone();
        let n = inst.n();
        let idx: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        other.profile = inst.profile.with_prefs(idx.iter().map(|&i| inst.profile.prefs()[i].clone()).collect()).unwrap();
        other.deltas = idx.iter().map(|&i| inst.deltas[i]).collect();
        other.prices = idx.iter().map(|&i| inst.prices[i]).collect();
        prop_assert_eq!(decide(&inst, true), decide(&other, true));
    }

    #[test]
    fn oracle_ignores_alternative_names(inst in instance(), sigma in Just((0..4usize).collect::<Vec<_>>()).prop_shuffle()) {
        // Bucklin-type and pairwise rules are neutral; tie-breaking is not
        // involved because only a unique winner counts.
        let m = inst.m();
        let sigma: Vec<usize> = sigma.into_iter().filter(|&a| a < m).collect();
        let mut other = inst.clone();
        other.profile = inst.profile.with_prefs(inst.profile.prefs().iter().map(|p| relabel(p, &sigma)).collect()).unwrap();
        other.target = sigma[inst.target];
        prop_assert_eq!(decide(&inst, true), decide(&other, true));
    }

    #[test]
    fn oracle_monotone(inst in instance(), voter in 0usize..4) {
        let base = decide(&inst, true);
        let mut wider = inst.clone();
        let v = voter % inst.n();
        wider.deltas[v] += 1;
        let mut richer = inst.clone();
        richer.budget += 1;
        if base.is_some() {
            prop_assert!(decide(&wider, true).is_some());
            prop_assert!(decide(&richer, true).is_some());
        }
        if let (Some(a), Some(b)) = (base, decide(&wider, true)) {
            prop_assert!(b <= a);
        }
    }

    #[test]
    fn pruning_keeps_answer(inst in instance()) {
        let a = solve_exhaustive(&inst, &OracleBudget { prune: true, ..OracleBudget::default() }).unwrap();
        let b = solve_exhaustive(&inst, &OracleBudget { prune: false, ..OracleBudget::default() }).unwrap();
        prop_assert_eq!(a.cost(), b.cost());
        prop_assert_eq!(a.witness().map(|w| w.profile.clone()), b.witness().map(|w| w.profile.clone()));
    }
}
