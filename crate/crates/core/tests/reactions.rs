//! Derived matrices and delta operations checked against the closed-form
//! rules, restated here independently of the library.

use std::sync::Arc;

use occsim_core::reaction::{base_lookup, Matrix, MatrixError, ReactionSet, Slot};
use occsim_core::{parse_scenario, AgentId, AgentLimit, Delta, Occurrence, Scenario, Session, StimulusId};
use proptest::prelude::*;

fn base(a: i32, v: i32) -> i32 {
    base_lookup(a, v).unwrap()
}

fn oracle(slot: Slot, a: i32, v: i32) -> i32 {
    match slot {
        Slot::EventHappiness
        | Slot::ObjectHappiness
        | Slot::ActionAffectedHappiness
        | Slot::ActionPerpetratorHappiness => base(a, v),
        Slot::ObjectPride | Slot::ActionPerpetratorPride => {
            if a > 0 {
                base(a, v)
            } else {
                0
            }
        }
        Slot::ObjectAnger | Slot::ActionPerpetratorAnger => std::cmp::max(0, -base(a, v)),
    }
}

#[test]
fn derived_matrices_equal_closed_form_tabulation() {
    let set = ReactionSet::default();
    for slot in Slot::ALL {
        let mut cells = 0;
        for a in -5..=5 {
            for v in -5..=5 {
                assert_eq!(
                    set.matrix(slot).lookup(a, v).unwrap(),
                    oracle(slot, a, v),
                    "{slot} at ({a}, {v})"
                );
                cells += 1;
            }
        }
        assert_eq!(cells, 121);
    }
}

#[test]
fn anger_matrices_are_nonnegative_and_bounded() {
    let set = ReactionSet::default();
    for slot in [Slot::ObjectAnger, Slot::ActionPerpetratorAnger] {
        assert!(set.matrix(slot).cells().all(|(_, _, v)| (0..=5).contains(&v)));
    }
    assert_eq!(set.matrix(Slot::ObjectAnger).lookup(-5, 5), Ok(5));
}

#[test]
fn override_shape_error() {
    let ten_by_eleven: String = Matrix::BASE
        .to_string()
        .lines()
        .skip(1)
        .map(|l| format!("{l}\n"))
        .collect();
    assert!(matches!(ten_by_eleven.parse::<Matrix>(), Err(MatrixError::Shape { .. })));
}

#[test]
fn overrides_change_behavior_globally() {
    let scenario = othello();
    let zero_pride = Matrix::tabulate(|_, _| 0);
    let set = Arc::new(ReactionSet::materialize([(Slot::ObjectPride, zero_pride)]).unwrap());
    let mut session = Session::with_reactions(Arc::new(scenario), set);
    session
        .apply(Occurrence::Object {
            id: StimulusId::new("lieutenancy").unwrap(),
            to: agent("rodrigo"),
        })
        .unwrap();
    let rodrigo = session.emotions(&agent("rodrigo")).unwrap();
    assert_eq!((rodrigo.happiness(), rodrigo.pride()), (5, 0));
}

fn othello() -> Scenario {
    let text = include_str!("../../../fixtures/othello.json");
    parse_scenario(text, AgentLimit::Strict).unwrap().value
}

fn agent(s: &str) -> AgentId {
    AgentId::new(s).unwrap()
}

fn affection(s: &Scenario, from: &AgentId, to: &AgentId) -> i32 {
    s.affection(from, to).unwrap()
}

proptest! {
    #[test]
    fn event_deltas_follow_the_rule(focal in 0usize..4, d in -5i32..=5) {
        let s = othello();
        let focal = s.agents()[focal].id.clone();
        let deltas = ReactionSet::standard().event_deltas(s.affections(), &focal, d).unwrap();
        prop_assert_eq!(deltas.len(), 4);
        for (o, delta) in deltas.iter() {
            let expected = Delta { happiness: base(affection(&s, o, &focal), d), anger: 0, pride: 0 };
            prop_assert_eq!(*delta, expected);
        }
        prop_assert_eq!(deltas.get(&focal).unwrap().happiness, d);
    }

    #[test]
    fn object_deltas_follow_the_rule(focal in 0usize..4, v in -5i32..=5) {
        let s = othello();
        let focal = s.agents()[focal].id.clone();
        let deltas = ReactionSet::standard().object_deltas(s.affections(), &focal, v).unwrap();
        for (o, delta) in deltas.iter() {
            let a = affection(&s, o, &focal);
            let h = base(a, v);
            let pride = if a > 0 || *o == focal { h } else { 0 };
            prop_assert_eq!(*delta, Delta { happiness: h, anger: std::cmp::max(0, -h), pride });
        }
    }

    #[test]
    fn action_deltas_follow_the_rule(by in 0usize..4, on in 0usize..4, p in -5i32..=5) {
        let s = othello();
        let performer = s.agents()[by].id.clone();
        let affected = s.agents()[on].id.clone();
        let deltas = ReactionSet::standard()
            .action_deltas(s.affections(), &performer, &affected, p)
            .unwrap();
        for (o, delta) in deltas.iter() {
            let a_t = affection(&s, o, &affected);
            let a_p = affection(&s, o, &performer);
            let h = base(a_t, p);
            let anger = if *o != performer { std::cmp::max(0, -h) } else { 0 };
            let pride = if *o != performer && a_p > 0 {
                base(a_p, p)
            } else if *o == performer {
                p
            } else {
                0
            };
            prop_assert_eq!(*delta, Delta { happiness: h, anger, pride });
        }
    }

    #[test]
    fn deltas_are_bounded(by in 0usize..4, on in 0usize..4, v in -5i32..=5) {
        let s = othello();
        let set = ReactionSet::standard();
        let a = s.agents()[by].id.clone();
        let b = s.agents()[on].id.clone();
        let all = [
            set.event_deltas(s.affections(), &a, v).unwrap(),
            set.object_deltas(s.affections(), &a, v).unwrap(),
            set.action_deltas(s.affections(), &a, &b, v).unwrap(),
        ];
        for deltas in &all {
            for (_, d) in deltas.iter() {
                prop_assert!(d.anger >= 0);
                for x in [d.happiness, d.anger, d.pride] {
                    prop_assert!((-5..=5).contains(&x));
                }
            }
            if v == 0 {
                prop_assert!(deltas.is_zero());
            }
        }
    }
}

#[test]
fn out_of_range_valence_and_unknown_agent() {
    let s = othello();
    let set = ReactionSet::standard();
    assert!(set.event_deltas(s.affections(), &agent("iago"), 6).is_err());
    assert!(set.object_deltas(s.affections(), &agent("cassio"), 1).is_err());
    assert!(set
        .action_deltas(s.affections(), &agent("iago"), &agent("cassio"), 1)
        .is_err());
}

#[test]
fn zero_affection_observer_feels_nothing() {
    let text = include_str!("../../../fixtures/othello.json")
        .replace(r#""from": "rodrigo", "to": "desdemona", "value": 5"#, r#""from": "rodrigo", "to": "desdemona", "value": 0"#);
    let s = parse_scenario(&text, AgentLimit::Strict).unwrap().value;
    let set = ReactionSet::standard();
    let desdemona = agent("desdemona");
    for v in -5..=5 {
        for deltas in [
            set.event_deltas(s.affections(), &desdemona, v).unwrap(),
            set.object_deltas(s.affections(), &desdemona, v).unwrap(),
            set.action_deltas(s.affections(), &agent("iago"), &desdemona, v).unwrap(),
        ] {
            assert_eq!(deltas.get(&agent("rodrigo")).unwrap().happiness, 0);
        }
    }
}

#[test]
fn deltas_do_not_read_emotion_state() {
    let s = othello();
    let mut session = Session::new(s.clone());
    let occ = Occurrence::Event {
        id: StimulusId::new("storm").unwrap(),
        to: agent("othello"),
    };
    let first = session.deltas_for(&occ).unwrap();
    for _ in 0..4 {
        session.apply(occ.clone()).unwrap();
    }
    assert_eq!(session.deltas_for(&occ).unwrap(), first);
    assert_eq!(
        ReactionSet::standard().event_deltas(s.affections(), &agent("othello"), -3).unwrap(),
        first
    );
}
