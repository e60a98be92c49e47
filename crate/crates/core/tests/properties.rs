use std::sync::Arc;

use occsim_core::model::{AffectionDraft, AgentDraft, AvatarDraft, HairColor, HairStyle, StimulusDraft};
use occsim_core::{
    clamp_emotion, face_label, parse_scenario, parse_script, primary_emotion, replay,
    serialize_scenario, validate_scenario, AgentId, AgentLimit, EmotionKind, EmotionVector,
    Occurrence, ReactionSet, Scenario, ScenarioDraft, Session, StimulusId,
};
use proptest::prelude::*;

fn draft_strategy() -> impl Strategy<Value = ScenarioDraft> {
    (2usize..=4)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(-5i64..=5, n * (n - 1)),
                prop::collection::vec((0usize..HairStyle::ALL.len(), 0usize..HairColor::ALL.len(), any::<bool>()), n),
                prop::collection::vec(-5i64..=5, 1..4),
                prop::collection::vec(-5i64..=5, 1..4),
                prop::collection::vec(-5i64..=5, 1..4),
            )
        })
        .prop_map(|(n, affections, avatars, events, objects, actions)| {
            let names = ["zed", "amy", "bob", "kim"];
            let ids: Vec<String> = names[..n].iter().map(|s| s.to_string()).collect();
            let agents = ids
                .iter()
                .zip(avatars)
                .map(|(id, (s, c, g))| AgentDraft {
                    id: id.clone(),
                    name: id.to_uppercase(),
                    avatar: AvatarDraft {
                        hair_style: HairStyle::ALL[s].token().into(),
                        hair_color: HairColor::ALL[c].token().into(),
                        glasses: g,
                    },
                })
                .collect();
            let mut values = affections.into_iter();
            let mut pairs = Vec::new();
            for f in &ids {
                for t in &ids {
                    if f != t {
                        pairs.push(AffectionDraft {
                            from: f.clone(),
                            to: t.clone(),
                            value: values.next().unwrap(),
                        });
                    }
                }
            }
            pairs.reverse();
            let stimuli = |prefix: &str, vals: Vec<i64>| {
                vals.into_iter()
                    .enumerate()
                    .map(|(i, value)| StimulusDraft {
                        id: format!("{prefix}{i}"),
                        name: format!("{prefix} #{i}"),
                        value,
                    })
                    .collect()
            };
            ScenarioDraft {
                agents,
                affections: pairs,
                events: stimuli("e", events),
                objects: stimuli("o", objects),
                actions: stimuli("a", actions),
            }
        })
}

fn scenario_strategy() -> impl Strategy<Value = Scenario> {
    draft_strategy().prop_map(|d| validate_scenario(&d, AgentLimit::Strict).unwrap())
}

/// Occurrence picked by raw indices, resolved against a scenario.
#[derive(Debug, Clone)]
enum Pick {
    Event(usize, usize),
    Object(usize, usize),
    Action(usize, usize, usize),
    Affection(usize, usize, i32),
}

fn pick_strategy() -> impl Strategy<Value = Pick> {
    prop_oneof![
        3 => (any::<usize>(), any::<usize>()).prop_map(|(e, a)| Pick::Event(e, a)),
        3 => (any::<usize>(), any::<usize>()).prop_map(|(e, a)| Pick::Object(e, a)),
        3 => (any::<usize>(), any::<usize>(), any::<usize>()).prop_map(|(e, a, b)| Pick::Action(e, a, b)),
        1 => (any::<usize>(), any::<usize>(), -5i32..=5).prop_map(|(a, b, v)| Pick::Affection(a, b, v)),
    ]
}

fn resolve(s: &Scenario, pick: &Pick) -> Occurrence {
    let agents = s.agents();
    let agent = |i: usize| agents[i % agents.len()].id.clone();
    let stim = |c: &occsim_core::model::Catalog, i: usize| -> StimulusId {
        c.iter().nth(i % c.len()).unwrap().id.clone()
    };
    match *pick {
        Pick::Event(e, a) => Occurrence::Event { id: stim(s.events(), e), to: agent(a) },
        Pick::Object(e, a) => Occurrence::Object { id: stim(s.objects(), e), to: agent(a) },
        Pick::Action(e, a, b) => Occurrence::Action { id: stim(s.actions(), e), by: agent(a), on: agent(b) },
        Pick::Affection(a, b, value) => {
            let from = agent(a);
            let mut to = agent(b);
            if to == from {
                to = agent(a + 1);
            }
            Occurrence::Affection { from, to, value }
        }
    }
}

fn in_range(v: &EmotionVector) -> bool {
    EmotionKind::ALL.iter().all(|k| k.range().contains(&v.get(*k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn state_stays_in_range(s in scenario_strategy(), picks in prop::collection::vec(pick_strategy(), 0..40)) {
        let mut session = Session::new(s.clone());
        for p in &picks {
            session.apply(resolve(&s, p)).unwrap();
            prop_assert!(session.state().values().all(in_range));
        }
    }

    #[test]
    fn replay_equals_stepwise_and_fold(s in scenario_strategy(), picks in prop::collection::vec(pick_strategy(), 0..30)) {
        let occurrences: Vec<Occurrence> = picks.iter().map(|p| resolve(&s, p)).collect();
        let mut stepwise = Session::new(s.clone());
        for o in &occurrences {
            stepwise.apply(o.clone()).unwrap();
        }
        let replayed = replay(Arc::new(s), ReactionSet::standard(), &occurrences).unwrap();
        prop_assert_eq!(replayed.state(), stepwise.state());
        prop_assert_eq!(replayed.affections(), stepwise.affections());
        prop_assert_eq!(&stepwise.fold_history(), stepwise.state());
        let seqs: Vec<u64> = stepwise.history().iter().map(|e| e.sequence).collect();
        prop_assert_eq!(seqs, (1..=occurrences.len() as u64).collect::<Vec<_>>());
    }

    #[test]
    fn undo_is_exact(s in scenario_strategy(), prefix in prop::collection::vec(pick_strategy(), 0..20), x in pick_strategy()) {
        let mut session = Session::new(s.clone());
        for p in &prefix {
            session.apply(resolve(&s, p)).unwrap();
        }
        let before = session.clone();
        session.apply(resolve(&s, &x)).unwrap();
        session.undo().unwrap();
        prop_assert_eq!(session, before);
    }

    #[test]
    fn unclamped_pairs_commute(s in scenario_strategy(), x in pick_strategy(), y in pick_strategy()) {
        prop_assume!(!matches!(x, Pick::Affection(..)) && !matches!(y, Pick::Affection(..)));
        let (ox, oy) = (resolve(&s, &x), resolve(&s, &y));
        let base = Session::new(s.clone());
        let dx = base.deltas_for(&ox).unwrap();
        let dy = base.deltas_for(&oy).unwrap();
        let clamps = s.agents().iter().any(|a| {
            let (a, b) = (dx.get(&a.id).unwrap(), dy.get(&a.id).unwrap());
            EmotionKind::ALL.iter().any(|k| {
                let r = k.range();
                ![a.get(*k), b.get(*k), a.get(*k) + b.get(*k)].iter().all(|v| r.contains(v))
            })
        });
        let mut xy = base.clone();
        xy.apply(ox.clone()).unwrap();
        xy.apply(oy.clone()).unwrap();
        let mut yx = base;
        yx.apply(oy).unwrap();
        yx.apply(ox).unwrap();
        if !clamps {
            prop_assert_eq!(xy.state(), yx.state());
        }
    }

    #[test]
    fn serialize_parse_round_trip(s in scenario_strategy()) {
        let text = serialize_scenario(&s);
        let parsed = parse_scenario(&text, AgentLimit::Strict).unwrap().value;
        prop_assert_eq!(&parsed, &s);
        prop_assert_eq!(serialize_scenario(&parsed), text);
    }

    #[test]
    fn face_of_clamped_never_errors(kind in prop::sample::select(EmotionKind::ALL.to_vec()), v in any::<i32>()) {
        let label = face_label(kind, clamp_emotion(kind, v)).unwrap();
        prop_assert!(label.face_index < kind.face_count());
    }

    #[test]
    fn primary_is_dominant(h in -5i32..=5, a in 0i32..=5, p in -5i32..=5) {
        let v = EmotionVector::new(h, a, p).unwrap();
        let label = primary_emotion(&v);
        prop_assert_eq!(label, primary_emotion(&v));
        for k in EmotionKind::ALL {
            prop_assert!(label.value.abs() >= v.get(k).abs());
        }
    }

    #[test]
    fn self_affection_is_max(s in scenario_strategy()) {
        for a in s.agents() {
            prop_assert_eq!(s.affection(&a.id, &a.id), Ok(5));
        }
    }

    #[test]
    fn script_lines_are_recorded(s in scenario_strategy(), picks in prop::collection::vec((pick_strategy(), 0usize..3), 0..20)) {
        let mut text = String::new();
        let mut expected = Vec::new();
        let mut line = 0;
        for (p, filler) in &picks {
            for _ in 0..*filler {
                line += 1;
                text.push_str(if line % 2 == 0 { "\n" } else { "   # note\n" });
            }
            line += 1;
            let o = resolve(&s, p);
            text.push_str(&format!("{o}\n"));
            expected.push((o, line));
        }
        let script = parse_script(&text).unwrap();
        let got: Vec<_> = script.steps.into_iter().map(|st| (st.occurrence, st.line)).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn every_field_error_is_diagnosed(d in draft_strategy(), bad in prop::collection::btree_set(0usize..3, 1..=3)) {
        let mut d = d;
        for b in &bad {
            match b {
                0 => d.events[0].value = 9,
                1 => d.objects[0].value = -7,
                _ => d.actions[0].value = 6,
            }
        }
        let s = validate_scenario(&d, AgentLimit::Strict).map(|_| ()).unwrap_err();
        prop_assert!(s.0.len() >= bad.len());
    }
}

#[test]
fn affection_ids_resolve_for_any_agent() {
    let s = parse_scenario(include_str!("../../../fixtures/harry.json"), AgentLimit::Strict)
        .unwrap()
        .value;
    let ghost = AgentId::new("voldemort").unwrap();
    assert!(s.affection(&ghost, &s.agents()[0].id).is_err());
}
