//! Domain types for story characters, their relationships, the stimulus
//! catalogs, and the three-emotion state each character carries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Lowest value on every bipolar scale (affection, valences, happiness, pride).
pub const SCALE_MIN: i32 = -5;
/// Highest value on every scale.
pub const SCALE_MAX: i32 = 5;
/// Longest accepted id token.
pub const MAX_TOKEN_LEN: usize = 32;

/// Returns true for `[a-z][a-z0-9_]*` tokens of at most [`MAX_TOKEN_LEN`] chars.
pub fn is_valid_token(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    s.len() <= MAX_TOKEN_LEN
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid id token {0:?}: expected [a-z][a-z0-9_]* of at most 32 characters")]
pub struct InvalidToken(pub String);

macro_rules! token_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(try_from = "String", into = "String")]
        pub struct $name(String);

        impl $name {
            pub fn new(s: impl Into<String>) -> Result<Self, InvalidToken> {
                let s = s.into();
                if is_valid_token(&s) {
                    Ok(Self(s))
                } else {
                    Err(InvalidToken(s))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl TryFrom<String> for $name {
            type Error = InvalidToken;
            fn try_from(s: String) -> Result<Self, Self::Error> {
                Self::new(s)
            }
        }

        impl From<$name> for String {
            fn from(id: $name) -> String {
                id.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

token_newtype!(
    /// Identifier of an agent, unique within a scenario.
    AgentId
);
token_newtype!(
    /// Identifier of an event, object or action within its catalog.
    StimulusId
);

macro_rules! palette {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $token:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $token)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn token(self) -> &'static str {
                match self {
                    $($name::$variant => $token),+
                }
            }

            pub fn from_token(s: &str) -> Option<Self> {
                match s {
                    $($token => Some($name::$variant),)+
                    _ => None,
                }
            }
        }
    };
}

palette!(HairStyle {
    Short => "short",
    Long => "long",
    Curly => "curly",
    Braided => "braided",
    Bald => "bald",
});

palette!(HairColor {
    Black => "black",
    Brown => "brown",
    Blonde => "blonde",
    Red => "red",
    Auburn => "auburn",
    Gray => "gray",
    White => "white",
    Blue => "blue",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AvatarDescriptor {
    pub hair_style: HairStyle,
    pub hair_color: HairColor,
    pub glasses: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agent {
    pub id: AgentId,
    pub name: String,
    pub avatar: AvatarDescriptor,
}

macro_rules! bipolar_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(try_from = "i64", into = "i32")]
        pub struct $name(i8);

        impl $name {
            pub const MIN: $name = $name(SCALE_MIN as i8);
            pub const MAX: $name = $name(SCALE_MAX as i8);

            pub fn new(value: i64) -> Option<Self> {
                (SCALE_MIN as i64..=SCALE_MAX as i64)
                    .contains(&value)
                    .then(|| Self(value as i8))
            }

            pub fn get(self) -> i32 {
                self.0 as i32
            }
        }

        impl TryFrom<i64> for $name {
            type Error = String;
            fn try_from(v: i64) -> Result<Self, String> {
                Self::new(v).ok_or_else(|| format!("{v} is outside -5..=5"))
            }
        }

        impl From<$name> for i32 {
            fn from(v: $name) -> i32 {
                v.get()
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:+}", self.0)
            }
        }
    };
}

bipolar_newtype!(
    /// Directed affection of one agent toward another, from -5 (total hatred)
    /// through 0 (indifference) to +5 (unconditional love).
    Affection
);
bipolar_newtype!(
    /// Desirability of an event, appeal of an object, or plausibility of an action.
    Valence
);

/// Complete directed affection relation over a set of agents.
///
/// Self-pairs are never stored: every agent loves itself unconditionally, so
/// `get(a, a)` is always [`Affection::MAX`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffectionTable {
    agents: Vec<AgentId>,
    entries: BTreeMap<(AgentId, AgentId), Affection>,
}

impl AffectionTable {
    pub(crate) fn from_parts(
        agents: Vec<AgentId>,
        entries: BTreeMap<(AgentId, AgentId), Affection>,
    ) -> Self {
        Self { agents, entries }
    }

    /// Agents covered by the table, in ascending id order.
    pub fn agents(&self) -> &[AgentId] {
        &self.agents
    }

    pub fn contains_agent(&self, id: &AgentId) -> bool {
        self.agents.binary_search(id).is_ok()
    }

    pub fn get(&self, from: &AgentId, to: &AgentId) -> Result<Affection, UnknownAgent> {
        for id in [from, to] {
            if !self.contains_agent(id) {
                return Err(UnknownAgent(id.clone()));
            }
        }
        if from == to {
            return Ok(Affection::MAX);
        }
        Ok(self.entries[&(from.clone(), to.clone())])
    }

    /// Replaces a distinct-pair entry and returns the previous value.
    pub(crate) fn set(
        &mut self,
        from: &AgentId,
        to: &AgentId,
        value: Affection,
    ) -> Option<Affection> {
        debug_assert_ne!(from, to);
        self.entries
            .get_mut(&(from.clone(), to.clone()))
            .map(|slot| std::mem::replace(slot, value))
    }

    /// Stored entries in `(from, to)` order; self-pairs are excluded.
    pub fn iter(&self) -> impl Iterator<Item = (&AgentId, &AgentId, Affection)> {
        self.entries.iter().map(|((f, t), a)| (f, t, *a))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown agent `{0}`")]
pub struct UnknownAgent(pub AgentId);

/// One catalog entry. The valence reads as desirability for events, appeal
/// for objects, and plausibility for actions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StimulusDef {
    pub id: StimulusId,
    pub name: String,
    #[serde(rename = "value")]
    pub valence: Valence,
}

pub type EventDef = StimulusDef;
pub type ObjectDef = StimulusDef;
pub type ActionDef = StimulusDef;

/// Catalog of stimuli sorted by id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    entries: Vec<StimulusDef>,
}

impl Catalog {
    pub(crate) fn from_sorted(entries: Vec<StimulusDef>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].id < w[1].id));
        Self { entries }
    }

    pub fn get(&self, id: &StimulusId) -> Option<&StimulusDef> {
        self.entries
            .binary_search_by(|e| e.id.cmp(id))
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn iter(&self) -> std::slice::Iter<'_, StimulusDef> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The three stimulus catalogs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StimulusKind {
    Event,
    Object,
    Action,
}

impl StimulusKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StimulusKind::Event => "event",
            StimulusKind::Object => "object",
            StimulusKind::Action => "action",
        }
    }

    /// Name of the scenario document field holding this catalog.
    pub fn catalog_field(self) -> &'static str {
        match self {
            StimulusKind::Event => "events",
            StimulusKind::Object => "objects",
            StimulusKind::Action => "actions",
        }
    }
}

/// A validated scenario: agents, their affections, and the stimulus catalogs.
///
/// Agents and catalog entries are kept in ascending id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    agents: Vec<Agent>,
    affections: AffectionTable,
    events: Catalog,
    objects: Catalog,
    actions: Catalog,
}

impl Scenario {
    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn agent(&self, id: &AgentId) -> Option<&Agent> {
        self.agents
            .binary_search_by(|a| a.id.cmp(id))
            .ok()
            .map(|i| &self.agents[i])
    }

    pub fn affections(&self) -> &AffectionTable {
        &self.affections
    }

    pub fn catalog(&self, kind: StimulusKind) -> &Catalog {
        match kind {
            StimulusKind::Event => &self.events,
            StimulusKind::Object => &self.objects,
            StimulusKind::Action => &self.actions,
        }
    }

    pub fn events(&self) -> &Catalog {
        &self.events
    }

    pub fn objects(&self) -> &Catalog {
        &self.objects
    }

    pub fn actions(&self) -> &Catalog {
        &self.actions
    }

    /// Affection of `from` toward `to`; +5 when they are the same agent.
    pub fn affection(&self, from: &AgentId, to: &AgentId) -> Result<i32, UnknownAgent> {
        self.affections.get(from, to).map(Affection::get)
    }

    /// Unvalidated form of this scenario, in canonical order.
    pub fn to_draft(&self) -> ScenarioDraft {
        let stimuli = |c: &Catalog| {
            c.iter()
                .map(|s| StimulusDraft {
                    id: s.id.to_string(),
                    name: s.name.clone(),
                    value: s.valence.get() as i64,
                })
                .collect()
        };
        ScenarioDraft {
            agents: self
                .agents
                .iter()
                .map(|a| AgentDraft {
                    id: a.id.to_string(),
                    name: a.name.clone(),
                    avatar: AvatarDraft {
                        hair_style: a.avatar.hair_style.token().to_owned(),
                        hair_color: a.avatar.hair_color.token().to_owned(),
                        glasses: a.avatar.glasses,
                    },
                })
                .collect(),
            affections: self
                .affections
                .iter()
                .map(|(f, t, a)| AffectionDraft {
                    from: f.to_string(),
                    to: t.to_string(),
                    value: a.get() as i64,
                })
                .collect(),
            events: stimuli(&self.events),
            objects: stimuli(&self.objects),
            actions: stimuli(&self.actions),
        }
    }
}

/// Scenario as authored, before any checking. Every field may hold an
/// invalid value; [`validate_scenario`] reports all of them at once.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScenarioDraft {
    pub agents: Vec<AgentDraft>,
    pub affections: Vec<AffectionDraft>,
    pub events: Vec<StimulusDraft>,
    pub objects: Vec<StimulusDraft>,
    pub actions: Vec<StimulusDraft>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentDraft {
    pub id: String,
    pub name: String,
    pub avatar: AvatarDraft,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvatarDraft {
    pub hair_style: String,
    pub hair_color: String,
    pub glasses: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffectionDraft {
    pub from: String,
    pub to: String,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StimulusDraft {
    pub id: String,
    pub name: String,
    pub value: i64,
}

impl ScenarioDraft {
    pub fn stimuli(&self, kind: StimulusKind) -> &[StimulusDraft] {
        match kind {
            StimulusKind::Event => &self.events,
            StimulusKind::Object => &self.objects,
            StimulusKind::Action => &self.actions,
        }
    }
}

/// Bounds on the number of agents in a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AgentLimit {
    /// Two to four agents.
    #[default]
    Strict,
    /// Two to eight agents.
    Relaxed,
}

impl AgentLimit {
    pub fn range(self) -> std::ops::RangeInclusive<usize> {
        match self {
            AgentLimit::Strict => 2..=4,
            AgentLimit::Relaxed => 2..=8,
        }
    }
}

/// One problem found in a [`ScenarioDraft`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("scenario has {found} agents; expected {min} to {max}")]
    AgentCountOutOfRange { found: usize, min: usize, max: usize },
    #[error("invalid id {id:?}: expected [a-z][a-z0-9_]* of at most 32 characters")]
    InvalidId { path: String, id: String },
    #[error("duplicate id `{id}`")]
    DuplicateId { path: String, id: String },
    #[error("{path} must not be empty")]
    EmptyName { path: String },
    #[error("{token:?} is not in the avatar palette")]
    UnknownAvatarToken { path: String, token: String },
    #[error("affection refers to unknown agent `{id}`")]
    UnknownAgent { path: String, id: String },
    #[error("self-affection {id} -> {id} must not be supplied; it is always +5")]
    SelfAffectionSupplied { path: String, id: String },
    #[error("affection {from} -> {to} is given more than once")]
    DuplicateAffection { path: String, from: String, to: String },
    #[error("missing affection {from} -> {to}")]
    MissingAffectionPair { from: String, to: String },
    #[error("value {value} is outside -5..=5")]
    ValenceOutOfRange { path: String, value: i64 },
}

impl ValidationError {
    /// Stable diagnostic code.
    pub fn code(&self) -> &'static str {
        match self {
            ValidationError::AgentCountOutOfRange { .. } => "AGENT_COUNT",
            ValidationError::InvalidId { .. } => "INVALID_ID",
            ValidationError::DuplicateId { .. } => "DUPLICATE_ID",
            ValidationError::EmptyName { .. } => "EMPTY_NAME",
            ValidationError::UnknownAvatarToken { .. } => "AVATAR_PALETTE",
            ValidationError::UnknownAgent { .. } => "UNKNOWN_AGENT",
            ValidationError::SelfAffectionSupplied { .. } => "SELF_AFFECTION",
            ValidationError::DuplicateAffection { .. } => "DUPLICATE_AFFECTION",
            ValidationError::MissingAffectionPair { .. } => "MISSING_AFFECTION",
            ValidationError::ValenceOutOfRange { .. } => "VALENCE_RANGE",
        }
    }

    /// Document path of the offending field, e.g. `events[2].value`.
    pub fn path(&self) -> &str {
        match self {
            ValidationError::AgentCountOutOfRange { .. } => "agents",
            ValidationError::MissingAffectionPair { .. } => "affections",
            ValidationError::InvalidId { path, .. }
            | ValidationError::DuplicateId { path, .. }
            | ValidationError::EmptyName { path }
            | ValidationError::UnknownAvatarToken { path, .. }
            | ValidationError::UnknownAgent { path, .. }
            | ValidationError::SelfAffectionSupplied { path, .. }
            | ValidationError::DuplicateAffection { path, .. }
            | ValidationError::ValenceOutOfRange { path, .. } => path,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} validation error(s); first: {}", .0.len(), .0[0])]
pub struct ValidationErrors(pub Vec<ValidationError>);

/// Checks a draft and returns the canonical scenario, or every violation found.
pub fn validate_scenario(
    draft: &ScenarioDraft,
    limit: AgentLimit,
) -> Result<Scenario, ValidationErrors> {
    let mut errors = Vec::new();

    let range = limit.range();
    if !range.contains(&draft.agents.len()) {
        errors.push(ValidationError::AgentCountOutOfRange {
            found: draft.agents.len(),
            min: *range.start(),
            max: *range.end(),
        });
    }

    let mut agents = Vec::with_capacity(draft.agents.len());
    let mut seen = BTreeSet::new();
    for (i, a) in draft.agents.iter().enumerate() {
        let path = format!("agents[{i}]");
        let id = check_id(&a.id, &format!("{path}.id"), &mut seen, &mut errors);
        if a.name.trim().is_empty() {
            errors.push(ValidationError::EmptyName {
                path: format!("{path}.name"),
            });
        }
        let hair_style = HairStyle::from_token(&a.avatar.hair_style);
        if hair_style.is_none() {
            errors.push(ValidationError::UnknownAvatarToken {
                path: format!("{path}.avatar.hair_style"),
                token: a.avatar.hair_style.clone(),
            });
        }
        let hair_color = HairColor::from_token(&a.avatar.hair_color);
        if hair_color.is_none() {
            errors.push(ValidationError::UnknownAvatarToken {
                path: format!("{path}.avatar.hair_color"),
                token: a.avatar.hair_color.clone(),
            });
        }
        if let (Some(id), Some(hair_style), Some(hair_color)) = (id, hair_style, hair_color) {
            agents.push(Agent {
                id,
                name: a.name.clone(),
                avatar: AvatarDescriptor {
                    hair_style,
                    hair_color,
                    glasses: a.avatar.glasses,
                },
            });
        }
    }
    agents.sort_by(|a, b| a.id.cmp(&b.id));
    let known: BTreeSet<&str> = draft.agents.iter().map(|a| a.id.as_str()).collect();

    let mut entries = BTreeMap::new();
    for (i, e) in draft.affections.iter().enumerate() {
        let path = format!("affections[{i}]");
        let mut resolvable = true;
        for (field, id) in [("from", &e.from), ("to", &e.to)] {
            if !known.contains(id.as_str()) {
                errors.push(ValidationError::UnknownAgent {
                    path: format!("{path}.{field}"),
                    id: id.clone(),
                });
                resolvable = false;
            }
        }
        let value = Affection::new(e.value);
        if value.is_none() {
            errors.push(ValidationError::ValenceOutOfRange {
                path: format!("{path}.value"),
                value: e.value,
            });
        }
        if e.from == e.to {
            errors.push(ValidationError::SelfAffectionSupplied {
                path,
                id: e.from.clone(),
            });
            continue;
        }
        if !resolvable {
            continue;
        }
        let (Ok(from), Ok(to)) = (AgentId::new(e.from.clone()), AgentId::new(e.to.clone())) else {
            // already reported against the agent's own id
            continue;
        };
        let key = (from, to);
        if entries.contains_key(&key) {
            errors.push(ValidationError::DuplicateAffection {
                path,
                from: e.from.clone(),
                to: e.to.clone(),
            });
            continue;
        }
        if let Some(value) = value {
            entries.insert(key, value);
        }
    }

    let ids: Vec<AgentId> = agents.iter().map(|a| a.id.clone()).collect();
    for from in &ids {
        for to in &ids {
            if from == to {
                continue;
            }
            let key = (from.clone(), to.clone());
            if entries.contains_key(&key) {
                continue;
            }
            // a present-but-out-of-range entry was already reported
            let supplied = draft
                .affections
                .iter()
                .any(|e| e.from == from.as_str() && e.to == to.as_str());
            if !supplied {
                errors.push(ValidationError::MissingAffectionPair {
                    from: from.to_string(),
                    to: to.to_string(),
                });
            }
        }
    }

    let mut catalogs = Vec::with_capacity(3);
    for kind in [StimulusKind::Event, StimulusKind::Object, StimulusKind::Action] {
        let mut seen = BTreeSet::new();
        let mut defs = Vec::new();
        for (i, s) in draft.stimuli(kind).iter().enumerate() {
            let path = format!("{}[{i}]", kind.catalog_field());
            let id = check_id(&s.id, &format!("{path}.id"), &mut seen, &mut errors)
                .map(|id| StimulusId(id.0));
            if s.name.trim().is_empty() {
                errors.push(ValidationError::EmptyName {
                    path: format!("{path}.name"),
                });
            }
            let valence = Valence::new(s.value);
            if valence.is_none() {
                errors.push(ValidationError::ValenceOutOfRange {
                    path: format!("{path}.value"),
                    value: s.value,
                });
            }
            if let (Some(id), Some(valence)) = (id, valence) {
                defs.push(StimulusDef {
                    id,
                    name: s.name.clone(),
                    valence,
                });
            }
        }
        defs.sort_by(|a, b| a.id.cmp(&b.id));
        catalogs.push(Catalog::from_sorted(defs));
    }

    if !errors.is_empty() {
        return Err(ValidationErrors(errors));
    }
    let actions = catalogs.pop().unwrap_or_default();
    let objects = catalogs.pop().unwrap_or_default();
    let events = catalogs.pop().unwrap_or_default();
    Ok(Scenario {
        agents,
        affections: AffectionTable::from_parts(ids, entries),
        events,
        objects,
        actions,
    })
}

fn check_id(
    raw: &str,
    path: &str,
    seen: &mut BTreeSet<String>,
    errors: &mut Vec<ValidationError>,
) -> Option<AgentId> {
    if !is_valid_token(raw) {
        errors.push(ValidationError::InvalidId {
            path: path.to_owned(),
            id: raw.to_owned(),
        });
        return None;
    }
    if !seen.insert(raw.to_owned()) {
        errors.push(ValidationError::DuplicateId {
            path: path.to_owned(),
            id: raw.to_owned(),
        });
        return None;
    }
    Some(AgentId(raw.to_owned()))
}

// ---------------------------------------------------------------------------
// Emotions

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmotionKind {
    Happiness,
    Anger,
    Pride,
}

impl EmotionKind {
    pub const ALL: [EmotionKind; 3] = [EmotionKind::Happiness, EmotionKind::Anger, EmotionKind::Pride];

    pub fn range(self) -> std::ops::RangeInclusive<i32> {
        match self {
            EmotionKind::Anger => 0..=SCALE_MAX,
            EmotionKind::Happiness | EmotionKind::Pride => SCALE_MIN..=SCALE_MAX,
        }
    }

    /// Number of representative faces for this emotion.
    pub fn face_count(self) -> usize {
        let r = self.range();
        (r.end() - r.start() + 1) as usize
    }

    /// Tie-break rank for [`primary_emotion`]; higher wins.
    fn priority(self) -> u8 {
        match self {
            EmotionKind::Pride => 2,
            EmotionKind::Anger => 1,
            EmotionKind::Happiness => 0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EmotionKind::Happiness => "happiness",
            EmotionKind::Anger => "anger",
            EmotionKind::Pride => "pride",
        }
    }
}

impl fmt::Display for EmotionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn clamp_emotion(kind: EmotionKind, value: i32) -> i32 {
    let r = kind.range();
    value.clamp(*r.start(), *r.end())
}

/// Pre-clamp change to one agent's emotions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Delta {
    pub happiness: i32,
    pub anger: i32,
    pub pride: i32,
}

impl Delta {
    pub const ZERO: Delta = Delta {
        happiness: 0,
        anger: 0,
        pride: 0,
    };

    pub fn get(&self, kind: EmotionKind) -> i32 {
        match kind {
            EmotionKind::Happiness => self.happiness,
            EmotionKind::Anger => self.anger,
            EmotionKind::Pride => self.pride,
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == Delta::ZERO
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{kind} value {value} is outside {}..={}", .kind.range().start(), .kind.range().end())]
pub struct ValueOutOfRange {
    pub kind: EmotionKind,
    pub value: i32,
}

/// One agent's current happiness (-5..=5), anger (0..=5) and pride (-5..=5).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct EmotionVector {
    happiness: i32,
    anger: i32,
    pride: i32,
}

impl EmotionVector {
    pub const NEUTRAL: EmotionVector = EmotionVector {
        happiness: 0,
        anger: 0,
        pride: 0,
    };

    pub fn new(happiness: i32, anger: i32, pride: i32) -> Result<Self, ValueOutOfRange> {
        for (kind, value) in [
            (EmotionKind::Happiness, happiness),
            (EmotionKind::Anger, anger),
            (EmotionKind::Pride, pride),
        ] {
            if !kind.range().contains(&value) {
                return Err(ValueOutOfRange { kind, value });
            }
        }
        Ok(Self {
            happiness,
            anger,
            pride,
        })
    }

    pub fn happiness(&self) -> i32 {
        self.happiness
    }

    pub fn anger(&self) -> i32 {
        self.anger
    }

    pub fn pride(&self) -> i32 {
        self.pride
    }

    pub fn get(&self, kind: EmotionKind) -> i32 {
        match kind {
            EmotionKind::Happiness => self.happiness,
            EmotionKind::Anger => self.anger,
            EmotionKind::Pride => self.pride,
        }
    }

    /// Adds a delta component-wise, clamping each result to its range.
    pub fn accumulate(&self, delta: &Delta) -> EmotionVector {
        EmotionVector {
            happiness: clamp_emotion(EmotionKind::Happiness, self.happiness + delta.happiness),
            anger: clamp_emotion(EmotionKind::Anger, self.anger + delta.anger),
            pride: clamp_emotion(EmotionKind::Pride, self.pride + delta.pride),
        }
    }

    /// Difference `self - earlier`, component-wise.
    pub fn since(&self, earlier: &EmotionVector) -> Delta {
        Delta {
            happiness: self.happiness - earlier.happiness,
            anger: self.anger - earlier.anger,
            pride: self.pride - earlier.pride,
        }
    }

    pub fn is_neutral(&self) -> bool {
        *self == EmotionVector::NEUTRAL
    }
}

/// Display form of a single emotion value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct EmotionLabel {
    pub kind: EmotionKind,
    pub value: i32,
    /// Named only at the ends and the midpoint of each scale.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<&'static str>,
    pub face_index: usize,
}

pub fn face_label(kind: EmotionKind, value: i32) -> Result<EmotionLabel, ValueOutOfRange> {
    let range = kind.range();
    if !range.contains(&value) {
        return Err(ValueOutOfRange { kind, value });
    }
    let label = match (kind, value) {
        (EmotionKind::Happiness, -5) => Some("distress"),
        (EmotionKind::Happiness, 5) => Some("euphoria"),
        (EmotionKind::Pride, -5) => Some("shame"),
        (EmotionKind::Pride, 5) => Some("pride"),
        (EmotionKind::Happiness | EmotionKind::Pride, 0) => Some("neutrality"),
        (EmotionKind::Anger, 0) => Some("calm"),
        (EmotionKind::Anger, 5) => Some("rage"),
        _ => None,
    };
    Ok(EmotionLabel {
        kind,
        value,
        label,
        face_index: (value - range.start()) as usize,
    })
}

/// The dominant emotion: largest magnitude, ties broken Pride > Anger > Happiness.
/// A neutral vector yields happiness at 0 ("neutrality").
pub fn primary_emotion(v: &EmotionVector) -> EmotionLabel {
    let kind = EmotionKind::ALL
        .into_iter()
        .filter(|k| v.get(*k) != 0)
        .max_by_key(|k| (v.get(*k).abs(), k.priority()))
        .unwrap_or(EmotionKind::Happiness);
    face_label(kind, v.get(kind)).expect("vector components are always in range")
}
