//! Sessions: apply occurrences, accumulate clamped emotion state, keep the
//! history, undo, replay, and build the emotional map.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    face_label, primary_emotion, Affection, AffectionTable, AgentId, AgentLimit, EmotionKind,
    EmotionLabel, EmotionVector, Scenario, ScenarioDraft, StimulusId, StimulusKind,
    UnknownAgent, ValidationErrors,
};
use crate::reaction::{DeltaSet, ReactionError, ReactionSet};

/// One step of a story timeline.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Occurrence {
    /// An event befalls `to`.
    Event { id: StimulusId, to: AgentId },
    /// `to` acquires an object.
    Object { id: StimulusId, to: AgentId },
    /// `by` performs an action on `on`; the two may be the same agent.
    Action {
        id: StimulusId,
        by: AgentId,
        on: AgentId,
    },
    /// Sets the affection of `from` toward `to`.
    Affection {
        from: AgentId,
        to: AgentId,
        value: i32,
    },
}

/// Formats the occurrence as a script statement.
impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Occurrence::Event { id, to } => write!(f, "event {id} to {to}"),
            Occurrence::Object { id, to } => write!(f, "object {id} to {to}"),
            Occurrence::Action { id, by, on } => write!(f, "action {id} by {by} on {on}"),
            Occurrence::Affection { from, to, value } => {
                write!(f, "affection {from} -> {to} = {value}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("unknown agent `{0}`")]
    UnknownAgent(AgentId),
    #[error("unknown {} `{id}`", .kind.as_str())]
    UnknownStimulus { kind: StimulusKind, id: StimulusId },
    #[error("affection of `{0}` toward itself is fixed at +5")]
    SelfAffectionEdit(AgentId),
    #[error("affection value {0} is outside -5..=5")]
    AffectionOutOfRange(i32),
    #[error("history is empty")]
    EmptyHistory,
}

impl EngineError {
    pub fn code(&self) -> &'static str {
        match self {
            EngineError::UnknownAgent(_) => "UNKNOWN_AGENT",
            EngineError::UnknownStimulus { .. } => "UNKNOWN_ID",
            EngineError::SelfAffectionEdit(_) => "SELF_AFFECTION",
            EngineError::AffectionOutOfRange(_) => "VALUE_RANGE",
            EngineError::EmptyHistory => "EMPTY_HISTORY",
        }
    }
}

impl From<UnknownAgent> for EngineError {
    fn from(e: UnknownAgent) -> Self {
        EngineError::UnknownAgent(e.0)
    }
}

impl From<ReactionError> for EngineError {
    fn from(e: ReactionError) -> Self {
        match e {
            ReactionError::UnknownAgent(a) => a.into(),
            // catalog valences are validated with the scenario
            ReactionError::ValenceOutOfRange(v) => EngineError::AffectionOutOfRange(v),
        }
    }
}

pub type EmotionState = BTreeMap<AgentId, EmotionVector>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HistoryEntry {
    pub sequence: u64,
    pub occurrence: Occurrence,
    /// Pre-clamp deltas.
    pub deltas: DeltaSet,
    pub pre_state: EmotionState,
    /// Affection replaced by an affection edit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replaced_affection: Option<i32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Apply,
    Undo,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgentDiff {
    pub agent: AgentId,
    pub before: EmotionVector,
    /// Pre-clamp delta when applying; the exact restoring change when undoing.
    pub delta: crate::model::Delta,
    pub after: EmotionVector,
}

/// What one apply or undo did to every agent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateDiff {
    pub direction: Direction,
    pub sequence: u64,
    pub occurrence: Occurrence,
    pub agents: Vec<AgentDiff>,
}

/// A scenario being played out.
///
/// Writes are strictly serial (`&mut self`); the state is always the clamped
/// fold of the history over the all-neutral start.
#[derive(Debug, Clone)]
pub struct Session {
    scenario: Arc<Scenario>,
    reactions: Arc<ReactionSet>,
    affections: AffectionTable,
    state: EmotionState,
    history: Vec<HistoryEntry>,
}

impl PartialEq for Session {
    fn eq(&self, other: &Self) -> bool {
        self.scenario == other.scenario
            && self.reactions == other.reactions
            && self.affections == other.affections
            && self.state == other.state
            && self.history == other.history
    }
}

impl Session {
    pub fn new(scenario: Scenario) -> Session {
        Session::with_reactions(Arc::new(scenario), ReactionSet::standard())
    }

    pub fn with_reactions(scenario: Arc<Scenario>, reactions: Arc<ReactionSet>) -> Session {
        let state = scenario
            .agents()
            .iter()
            .map(|a| (a.id.clone(), EmotionVector::NEUTRAL))
            .collect();
        Session {
            affections: scenario.affections().clone(),
            scenario,
            reactions,
            state,
            history: Vec::new(),
        }
    }

    /// Validates a draft and opens a neutral session on it.
    pub fn from_draft(draft: &ScenarioDraft, limit: AgentLimit) -> Result<Session, ValidationErrors> {
        crate::model::validate_scenario(draft, limit).map(Session::new)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn reactions(&self) -> &Arc<ReactionSet> {
        &self.reactions
    }

    /// Scenario affections with all edits so far applied.
    pub fn affections(&self) -> &AffectionTable {
        &self.affections
    }

    pub fn state(&self) -> &EmotionState {
        &self.state
    }

    pub fn emotions(&self, agent: &AgentId) -> Option<&EmotionVector> {
        self.state.get(agent)
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    /// Computes the deltas `occurrence` would produce now, without applying it.
    pub fn deltas_for(&self, occurrence: &Occurrence) -> Result<DeltaSet, EngineError> {
        let valence = |kind: StimulusKind, id: &StimulusId| {
            self.scenario
                .catalog(kind)
                .get(id)
                .map(|s| s.valence.get())
                .ok_or_else(|| EngineError::UnknownStimulus {
                    kind,
                    id: id.clone(),
                })
        };
        let known = |id: &AgentId| {
            if self.affections.contains_agent(id) {
                Ok(())
            } else {
                Err(EngineError::UnknownAgent(id.clone()))
            }
        };
        match occurrence {
            Occurrence::Event { id, to } => {
                known(to)?;
                let v = valence(StimulusKind::Event, id)?;
                Ok(self.reactions.event_deltas(&self.affections, to, v)?)
            }
            Occurrence::Object { id, to } => {
                known(to)?;
                let v = valence(StimulusKind::Object, id)?;
                Ok(self.reactions.object_deltas(&self.affections, to, v)?)
            }
            Occurrence::Action { id, by, on } => {
                known(by)?;
                known(on)?;
                let v = valence(StimulusKind::Action, id)?;
                Ok(self.reactions.action_deltas(&self.affections, by, on, v)?)
            }
            Occurrence::Affection { from, to, value } => {
                known(from)?;
                known(to)?;
                if from == to {
                    return Err(EngineError::SelfAffectionEdit(from.clone()));
                }
                if Affection::new(*value as i64).is_none() {
                    return Err(EngineError::AffectionOutOfRange(*value));
                }
                Ok(DeltaSet::zero(self.affections.agents()))
            }
        }
    }

    /// Applies one occurrence. Deltas are computed from the pre-state
    /// affections only and applied to every agent at once.
    pub fn apply(&mut self, occurrence: Occurrence) -> Result<StateDiff, EngineError> {
        let deltas = self.deltas_for(&occurrence)?;
        let replaced_affection = match &occurrence {
            Occurrence::Affection { from, to, value } => {
                let value = Affection::new(*value as i64).ok_or(EngineError::AffectionOutOfRange(*value))?;
                self.affections.set(from, to, value).map(Affection::get)
            }
            _ => None,
        };

        let pre_state = self.state.clone();
        let mut agents = Vec::with_capacity(self.state.len());
        for (id, delta) in deltas.iter() {
            let before = self.state[id];
            let after = before.accumulate(delta);
            self.state.insert(id.clone(), after);
            agents.push(AgentDiff {
                agent: id.clone(),
                before,
                delta: *delta,
                after,
            });
        }

        let sequence = self.history.len() as u64 + 1;
        self.history.push(HistoryEntry {
            sequence,
            occurrence: occurrence.clone(),
            deltas,
            pre_state,
            replaced_affection,
        });
        self.debug_check_fold();
        Ok(StateDiff {
            direction: Direction::Apply,
            sequence,
            occurrence,
            agents,
        })
    }

    /// Removes the last history entry and restores the state it started from.
    pub fn undo(&mut self) -> Result<StateDiff, EngineError> {
        let entry = self.history.pop().ok_or(EngineError::EmptyHistory)?;
        if let (Occurrence::Affection { from, to, .. }, Some(previous)) =
            (&entry.occurrence, entry.replaced_affection)
        {
            let previous = Affection::new(previous as i64).expect("stored affection is in range");
            self.affections.set(from, to, previous);
        }
        let agents = entry
            .pre_state
            .iter()
            .map(|(id, restored)| {
                let before = self.state[id];
                AgentDiff {
                    agent: id.clone(),
                    before,
                    delta: restored.since(&before),
                    after: *restored,
                }
            })
            .collect();
        self.state = entry.pre_state;
        self.debug_check_fold();
        Ok(StateDiff {
            direction: Direction::Undo,
            sequence: entry.sequence,
            occurrence: entry.occurrence,
            agents,
        })
    }

    /// State obtained by folding the stored deltas over the neutral start.
    pub fn fold_history(&self) -> EmotionState {
        let mut state: EmotionState = self
            .state
            .keys()
            .map(|id| (id.clone(), EmotionVector::NEUTRAL))
            .collect();
        for entry in &self.history {
            for (id, delta) in entry.deltas.iter() {
                if let Some(v) = state.get_mut(id) {
                    *v = v.accumulate(delta);
                }
            }
        }
        state
    }

    /// Occurrences in history order.
    pub fn occurrences(&self) -> impl Iterator<Item = &Occurrence> {
        self.history.iter().map(|e| &e.occurrence)
    }

    fn debug_check_fold(&self) {
        #[cfg(debug_assertions)]
        {
            debug_assert_eq!(self.fold_history(), self.state, "state diverged from history");
        }
    }

    pub fn emotional_map(&self) -> EmotionalMap {
        emotional_map(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("occurrence {index} (`{occurrence}`): {source}")]
pub struct ReplayError {
    /// Zero-based position in the replayed sequence.
    pub index: usize,
    pub occurrence: Occurrence,
    pub source: EngineError,
}

/// Applies `occurrences` in order to a fresh session on `scenario`.
pub fn replay<'a>(
    scenario: Arc<Scenario>,
    reactions: Arc<ReactionSet>,
    occurrences: impl IntoIterator<Item = &'a Occurrence>,
) -> Result<Session, ReplayError> {
    let mut session = Session::with_reactions(scenario, reactions);
    for (index, occurrence) in occurrences.into_iter().enumerate() {
        session
            .apply(occurrence.clone())
            .map_err(|source| ReplayError {
                index,
                occurrence: occurrence.clone(),
                source,
            })?;
    }
    Ok(session)
}

// ---------------------------------------------------------------------------
// Emotional map

/// Eleven discrete glyph classes for affection values, one per integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AffectionGlyph {
    TotalHatred,
    Hatred,
    Dislike,
    MildDislike,
    SlightDislike,
    Indifference,
    SlightFondness,
    MildFondness,
    Fondness,
    Love,
    UnconditionalLove,
}

impl AffectionGlyph {
    const ALL: [AffectionGlyph; 11] = [
        AffectionGlyph::TotalHatred,
        AffectionGlyph::Hatred,
        AffectionGlyph::Dislike,
        AffectionGlyph::MildDislike,
        AffectionGlyph::SlightDislike,
        AffectionGlyph::Indifference,
        AffectionGlyph::SlightFondness,
        AffectionGlyph::MildFondness,
        AffectionGlyph::Fondness,
        AffectionGlyph::Love,
        AffectionGlyph::UnconditionalLove,
    ];

    pub fn for_value(affection: Affection) -> AffectionGlyph {
        AffectionGlyph::ALL[(affection.get() + 5) as usize]
    }

    /// Fixed-width terminal rendering.
    pub fn ascii(self) -> &'static str {
        match self {
            AffectionGlyph::TotalHatred => "xxxxx",
            AffectionGlyph::Hatred => " xxxx",
            AffectionGlyph::Dislike => "  xxx",
            AffectionGlyph::MildDislike => "   xx",
            AffectionGlyph::SlightDislike => "    x",
            AffectionGlyph::Indifference => "  .  ",
            AffectionGlyph::SlightFondness => "<    ",
            AffectionGlyph::MildFondness => "<3   ",
            AffectionGlyph::Fondness => "<3<  ",
            AffectionGlyph::Love => "<3<3 ",
            AffectionGlyph::UnconditionalLove => "<3<3<",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceIndices {
    pub happiness: usize,
    pub anger: usize,
    pub pride: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffectionView {
    pub to: AgentId,
    pub value: i32,
    pub glyph: AffectionGlyph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgentView {
    pub id: AgentId,
    pub name: String,
    pub emotions: EmotionVector,
    pub primary: EmotionLabel,
    pub faces: FaceIndices,
    /// This agent's affection toward each other agent.
    pub affections: Vec<AffectionView>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntryView {
    pub id: StimulusId,
    pub name: String,
    pub value: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogsView {
    pub events: Vec<CatalogEntryView>,
    pub objects: Vec<CatalogEntryView>,
    pub actions: Vec<CatalogEntryView>,
}

/// Display document for a whole session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmotionalMap {
    pub agents: Vec<AgentView>,
    pub catalogs: CatalogsView,
}

impl EmotionalMap {
    pub fn agent(&self, id: &str) -> Option<&AgentView> {
        self.agents.iter().find(|a| a.id.as_str() == id)
    }
}

pub fn emotional_map(session: &Session) -> EmotionalMap {
    let affections = session.affections();
    let agents = session
        .scenario()
        .agents()
        .iter()
        .map(|agent| {
            let emotions = session.state()[&agent.id];
            let face = |kind| {
                face_label(kind, emotions.get(kind))
                    .expect("state is always in range")
                    .face_index
            };
            AgentView {
                id: agent.id.clone(),
                name: agent.name.clone(),
                emotions,
                primary: primary_emotion(&emotions),
                faces: FaceIndices {
                    happiness: face(EmotionKind::Happiness),
                    anger: face(EmotionKind::Anger),
                    pride: face(EmotionKind::Pride),
                },
                affections: affections
                    .agents()
                    .iter()
                    .filter(|other| **other != agent.id)
                    .map(|other| {
                        let a = affections.get(&agent.id, other).expect("agents are known");
                        AffectionView {
                            to: other.clone(),
                            value: a.get(),
                            glyph: AffectionGlyph::for_value(a),
                        }
                    })
                    .collect(),
            }
        })
        .collect();
    let catalog = |kind| {
        session
            .scenario()
            .catalog(kind)
            .iter()
            .map(|s| CatalogEntryView {
                id: s.id.clone(),
                name: s.name.clone(),
                value: s.valence.get(),
            })
            .collect()
    };
    EmotionalMap {
        agents,
        catalogs: CatalogsView {
            events: catalog(StimulusKind::Event),
            objects: catalog(StimulusKind::Object),
            actions: catalog(StimulusKind::Action),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AffectionDraft, AgentDraft, AvatarDraft, StimulusDraft};

    fn id(s: &str) -> AgentId {
        AgentId::new(s).unwrap()
    }

    fn sid(s: &str) -> StimulusId {
        StimulusId::new(s).unwrap()
    }

    fn pair() -> Session {
        let agent = |id: &str| AgentDraft {
            id: id.into(),
            name: id.into(),
            avatar: AvatarDraft {
                hair_style: "short".into(),
                hair_color: "brown".into(),
                glasses: true,
            },
        };
        let stim = |id: &str, value| StimulusDraft {
            id: id.into(),
            name: id.into(),
            value,
        };
        let draft = ScenarioDraft {
            agents: vec![agent("harry"), agent("ron")],
            affections: vec![
                AffectionDraft { from: "harry".into(), to: "ron".into(), value: 4 },
                AffectionDraft { from: "ron".into(), to: "harry".into(), value: 5 },
            ],
            events: vec![stim("loss", -5), stim("cup", 5), stim("quiet", 0)],
            objects: vec![stim("broom", 4)],
            actions: vec![stim("insult", -3)],
        };
        Session::from_draft(&draft, AgentLimit::Strict).unwrap()
    }

    fn event(e: &str, to: &str) -> Occurrence {
        Occurrence::Event { id: sid(e), to: id(to) }
    }

    #[test]
    fn fresh_session_is_neutral() {
        let s = pair();
        assert!(s.state().values().all(EmotionVector::is_neutral));
        assert!(s.history().is_empty());
    }

    #[test]
    fn conflicting_feelings() {
        let mut s = pair();
        s.apply(event("loss", "harry")).unwrap();
        assert_eq!(s.emotions(&id("harry")).unwrap().happiness(), -5);
        let diff = s.apply(event("cup", "harry")).unwrap();
        assert_eq!(s.emotions(&id("harry")).unwrap().happiness(), 0);
        let harry = diff.agents.iter().find(|d| d.agent == id("harry")).unwrap();
        assert_eq!(harry.delta.happiness, 5);
    }

    #[test]
    fn clamp_keeps_pre_clamp_delta_in_history() {
        let mut s = pair();
        s.apply(event("cup", "harry")).unwrap();
        s.apply(event("cup", "harry")).unwrap();
        assert_eq!(s.emotions(&id("harry")).unwrap().happiness(), 5);
        assert_eq!(s.history()[1].deltas.get(&id("harry")).unwrap().happiness, 5);
    }

    #[test]
    fn undo_restores_snapshot() {
        let mut s = pair();
        let before = s.clone();
        s.apply(event("loss", "harry")).unwrap();
        let diff = s.undo().unwrap();
        assert_eq!(diff.direction, Direction::Undo);
        assert_eq!(s, before);
        assert_eq!(s.undo(), Err(EngineError::EmptyHistory));
    }

    #[test]
    fn affection_edit_changes_later_reactions_and_undoes() {
        let mut s = pair();
        let diff = s
            .apply(Occurrence::Affection { from: id("ron"), to: id("harry"), value: -2 })
            .unwrap();
        assert!(diff.agents.iter().all(|d| d.delta.is_zero()));
        s.apply(event("loss", "harry")).unwrap();
        assert_eq!(s.emotions(&id("ron")).unwrap().happiness(), 2);
        s.undo().unwrap();
        s.undo().unwrap();
        assert_eq!(s.affections().get(&id("ron"), &id("harry")).unwrap().get(), 5);
    }

    #[test]
    fn errors() {
        let mut s = pair();
        assert_eq!(
            s.apply(event("nope", "harry")),
            Err(EngineError::UnknownStimulus { kind: StimulusKind::Event, id: sid("nope") })
        );
        assert_eq!(
            s.apply(event("loss", "hermione")),
            Err(EngineError::UnknownAgent(id("hermione")))
        );
        assert_eq!(
            s.apply(Occurrence::Affection { from: id("ron"), to: id("ron"), value: 1 }),
            Err(EngineError::SelfAffectionEdit(id("ron")))
        );
        assert_eq!(
            s.apply(Occurrence::Affection { from: id("ron"), to: id("harry"), value: 6 }),
            Err(EngineError::AffectionOutOfRange(6))
        );
        assert!(s.history().is_empty());
    }

    #[test]
    fn replay_reports_index() {
        let s = pair();
        let script = vec![event("cup", "harry"), event("quiet", "ron"), event("cup", "ghost")];
        let err = replay(Arc::new(s.scenario().clone()), ReactionSet::standard(), &script).unwrap_err();
        assert_eq!(err.index, 2);
        let ok = replay(Arc::new(s.scenario().clone()), ReactionSet::standard(), &script[..2]).unwrap();
        assert_eq!(ok.history().len(), 2);
        let empty = replay(Arc::new(s.scenario().clone()), ReactionSet::standard(), &[]).unwrap();
        assert_eq!(empty, s);
    }

    #[test]
    fn occurrence_json_shape() {
        let occ = Occurrence::Action { id: sid("insult"), by: id("ron"), on: id("ron") };
        let json = serde_json::to_string(&occ).unwrap();
        assert_eq!(json, r#"{"kind":"action","id":"insult","by":"ron","on":"ron"}"#);
        assert_eq!(serde_json::from_str::<Occurrence>(&json).unwrap(), occ);
        assert!(serde_json::from_str::<Occurrence>(r#"{"kind":"event","id":"X","to":"ron"}"#).is_err());
        assert_eq!(occ.to_string(), "action insult by ron on ron");
    }

    #[test]
    fn map_of_fresh_session() {
        let map = pair().emotional_map();
        for a in &map.agents {
            assert_eq!((a.faces.happiness, a.faces.anger, a.faces.pride), (5, 0, 5));
        }
        let harry = map.agent("harry").unwrap();
        assert_eq!(harry.affections[0].value, 4);
        assert_eq!(harry.affections[0].glyph, AffectionGlyph::Love);
        assert_eq!(map.catalogs.events.len(), 3);
    }

    #[test]
    fn glyph_classes_are_distinct() {
        let glyphs: std::collections::HashSet<_> = (-5..=5)
            .map(|v| AffectionGlyph::for_value(Affection::new(v).unwrap()))
            .collect();
        assert_eq!(glyphs.len(), 11);
        let ascii: std::collections::HashSet<_> = glyphs.iter().map(|g| g.ascii()).collect();
        assert_eq!(ascii.len(), 11);
    }
}
