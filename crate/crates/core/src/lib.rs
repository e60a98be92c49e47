//! Deterministic emotion simulation for story characters.
//!
//! Agents hold fixed directed affections toward each other and react to
//! events, object acquisitions and actions through integer reaction
//! matrices. Reactions accumulate into each agent's happiness, anger and
//! pride with clamping, over a history that can be undone and replayed.
//!
//! ```
//! use occsim_core::{parse_scenario, parse_script, AgentLimit, Session};
//!
//! let text = include_str!("../../../fixtures/othello.json");
//! let scenario = parse_scenario(text, AgentLimit::Strict).unwrap().value;
//! let mut session = Session::new(scenario);
//! for step in parse_script("event fathers_wrath to desdemona").unwrap().steps {
//!     session.apply(step.occurrence).unwrap();
//! }
//! let map = session.emotional_map();
//! assert_eq!(map.agent("desdemona").unwrap().emotions.happiness(), -5);
//! assert_eq!(map.agent("iago").unwrap().emotions.happiness(), 4);
//! ```

pub mod engine;
pub mod io;
pub mod model;
pub mod reaction;

pub use engine::{
    emotional_map, replay, AffectionGlyph, AgentDiff, Direction, EmotionalMap, EngineError,
    HistoryEntry, Occurrence, ReplayError, Session, StateDiff,
};
pub use io::{
    parse_occurrence, parse_scenario, parse_script, serialize_scenario, Diagnostic, Parsed,
    Script, ScriptStep, Severity,
};
pub use model::{
    clamp_emotion, face_label, primary_emotion, validate_scenario, Affection, AffectionTable,
    Agent, AgentId, AgentLimit, AvatarDescriptor, Delta, EmotionKind, EmotionLabel,
    EmotionVector, Scenario, ScenarioDraft, StimulusId, StimulusKind, Valence, ValidationError,
    ValidationErrors,
};
pub use reaction::{base_lookup, DeltaSet, Matrix, MatrixError, ReactionSet, Slot};
