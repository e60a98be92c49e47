//! Reaction matrices.
//!
//! Every matrix is an 11x11 grid indexed by an observer's affection toward
//! the agent at the center of an occurrence (rows, -5..=5) and the valence
//! of the stimulus (columns, -5..=5). The event matrix is published data;
//! the other seven are tabulated from it by fixed rules and can each be
//! replaced by an override file.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{AffectionTable, AgentId, Delta, UnknownAgent, SCALE_MAX, SCALE_MIN};

const SIZE: usize = 11;

/// Happiness reaction to an event befalling another agent.
///
/// Row: affection toward the agent the event befalls. Column: desirability.
#[rustfmt::skip]
pub const BASE_MATRIX: [[i8; SIZE]; SIZE] = [
    //  -5  -4  -3  -2  -1   0   1   2   3   4   5
    [    5,  4,  3,  2,  1,  0, -1, -2, -3, -4, -5 ], // -5
    [    4,  3,  2,  1,  1,  0, -1, -1, -2, -3, -4 ], // -4
    [    3,  2,  2,  1,  1,  0, -1, -1, -2, -2, -3 ], // -3
    [    2,  2,  1,  1,  1,  0, -1, -1, -1, -2, -2 ], // -2
    [    1,  1,  1,  1,  1,  0, -1, -1, -1, -1, -1 ], // -1
    [    0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0 ], //  0
    [   -1, -1, -1, -1, -1,  0,  1,  1,  1,  1,  1 ], //  1
    [   -2, -2, -1, -1, -1,  0,  1,  1,  1,  2,  2 ], //  2
    [   -3, -2, -2, -1, -1,  0,  1,  1,  2,  2,  3 ], //  3
    [   -4, -3, -2, -1, -1,  0,  1,  1,  2,  3,  4 ], //  4
    [   -5, -4, -3, -2, -1,  0,  1,  2,  3,  4,  5 ], //  5
];

fn index(v: i32) -> Option<usize> {
    (SCALE_MIN..=SCALE_MAX)
        .contains(&v)
        .then(|| (v - SCALE_MIN) as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("matrix index ({row}, {col}) is outside -5..=5")]
pub struct IndexOutOfRange {
    pub row: i32,
    pub col: i32,
}

/// Looks up the published event matrix at (affection, valence).
pub fn base_lookup(affection: i32, valence: i32) -> Result<i32, IndexOutOfRange> {
    Matrix::BASE.lookup(affection, valence)
}

/// An 11x11 integer grid addressed by values in -5..=5.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Matrix([[i8; SIZE]; SIZE]);

impl Matrix {
    pub const BASE: Matrix = Matrix(BASE_MATRIX);

    /// Builds a matrix by evaluating `f(row, col)` over -5..=5 squared.
    pub fn tabulate(mut f: impl FnMut(i32, i32) -> i32) -> Matrix {
        let mut grid = [[0i8; SIZE]; SIZE];
        for (r, row) in grid.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                let v = f(r as i32 + SCALE_MIN, c as i32 + SCALE_MIN);
                *cell = v.clamp(i8::MIN as i32, i8::MAX as i32) as i8;
            }
        }
        Matrix(grid)
    }

    pub fn lookup(&self, row: i32, col: i32) -> Result<i32, IndexOutOfRange> {
        match (index(row), index(col)) {
            (Some(r), Some(c)) => Ok(self.0[r][c] as i32),
            _ => Err(IndexOutOfRange { row, col }),
        }
    }

    /// Lookup for arguments already known to be in range.
    fn at(&self, row: i32, col: i32) -> i32 {
        self.0[(row - SCALE_MIN) as usize][(col - SCALE_MIN) as usize] as i32
    }

    /// Cells as `(row, col, value)` with row/col in -5..=5.
    pub fn cells(&self) -> impl Iterator<Item = (i32, i32, i32)> + '_ {
        self.0.iter().enumerate().flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(move |(c, v)| (r as i32 + SCALE_MIN, c as i32 + SCALE_MIN, *v as i32))
        })
    }

    pub fn rows(&self) -> &[[i8; SIZE]; SIZE] {
        &self.0
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Writes the override file format: 11 lines of 11 space-separated integers.
impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.0 {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("line {line}: {message}")]
    Shape { line: usize, message: String },
    #[error("line {line}: {token:?} is not an integer")]
    Syntax { line: usize, token: String },
    #[error("{slot} entry ({row}, {col}) = {value} is outside {min}..={max}")]
    Range {
        slot: Slot,
        row: i32,
        col: i32,
        value: i32,
        min: i32,
        max: i32,
    },
}

impl FromStr for Matrix {
    type Err = MatrixError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut grid = [[0i8; SIZE]; SIZE];
        let mut rows = 0;
        let mut last_line = 0;
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            last_line = line_no;
            let trimmed = line.trim_end_matches('\r');
            if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
                continue;
            }
            if rows == SIZE {
                return Err(MatrixError::Shape {
                    line: line_no,
                    message: format!("more than {SIZE} rows"),
                });
            }
            let tokens: Vec<&str> = trimmed.split(' ').collect();
            if tokens.len() != SIZE {
                return Err(MatrixError::Shape {
                    line: line_no,
                    message: format!(
                        "expected {SIZE} integers separated by single spaces, found {} fields",
                        tokens.len()
                    ),
                });
            }
            for (c, tok) in tokens.iter().enumerate() {
                grid[rows][c] = tok.parse::<i8>().map_err(|_| MatrixError::Syntax {
                    line: line_no,
                    token: (*tok).to_owned(),
                })?;
            }
            rows += 1;
        }
        if rows != SIZE {
            return Err(MatrixError::Shape {
                line: last_line.max(1),
                message: format!("expected {SIZE} rows, found {rows}"),
            });
        }
        Ok(Matrix(grid))
    }
}

/// The eight reaction matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    /// Happiness about an event befalling someone; rows are affection toward them.
    EventHappiness,
    /// Happiness about someone acquiring an object; rows are affection toward the acquirer.
    ObjectHappiness,
    /// Pride or shame about someone acquiring an object.
    ObjectPride,
    /// Anger (frustration) about someone acquiring an object.
    ObjectAnger,
    /// Happiness of every non-performer about an action; rows are affection toward the affected agent.
    ActionAffectedHappiness,
    /// Happiness of the performer about their own action; rows are the performer's affection toward the affected agent.
    ActionPerpetratorHappiness,
    /// Pride or shame about the performer; rows are affection toward the performer.
    ActionPerpetratorPride,
    /// Anger at the performer; rows are affection toward the affected agent.
    ActionPerpetratorAnger,
}

impl Slot {
    pub const ALL: [Slot; 8] = [
        Slot::EventHappiness,
        Slot::ObjectHappiness,
        Slot::ObjectPride,
        Slot::ObjectAnger,
        Slot::ActionAffectedHappiness,
        Slot::ActionPerpetratorHappiness,
        Slot::ActionPerpetratorPride,
        Slot::ActionPerpetratorAnger,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Slot::EventHappiness => "event_happiness",
            Slot::ObjectHappiness => "object_happiness",
            Slot::ObjectPride => "object_pride",
            Slot::ObjectAnger => "object_anger",
            Slot::ActionAffectedHappiness => "action_affected_happiness",
            Slot::ActionPerpetratorHappiness => "action_perpetrator_happiness",
            Slot::ActionPerpetratorPride => "action_perpetrator_pride",
            Slot::ActionPerpetratorAnger => "action_perpetrator_anger",
        }
    }

    pub fn is_anger(self) -> bool {
        matches!(self, Slot::ObjectAnger | Slot::ActionPerpetratorAnger)
    }

    /// Allowed entry range for overrides of this slot.
    pub fn value_range(self) -> std::ops::RangeInclusive<i32> {
        if self.is_anger() {
            0..=SCALE_MAX
        } else {
            SCALE_MIN..=SCALE_MAX
        }
    }

    /// Closed-form rule the default matrix for this slot is tabulated from.
    pub fn default_rule(self, affection: i32, valence: i32) -> i32 {
        let h = Matrix::BASE.at(affection, valence);
        match self {
            Slot::EventHappiness
            | Slot::ObjectHappiness
            | Slot::ActionAffectedHappiness
            | Slot::ActionPerpetratorHappiness => h,
            Slot::ObjectPride | Slot::ActionPerpetratorPride => {
                if affection > 0 {
                    h
                } else {
                    0
                }
            }
            Slot::ObjectAnger | Slot::ActionPerpetratorAnger => (-h).max(0),
        }
    }

    fn position(self) -> usize {
        Slot::ALL.iter().position(|s| *s == self).unwrap_or(0)
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown matrix slot {0:?}")]
pub struct UnknownSlot(pub String);

impl FromStr for Slot {
    type Err = UnknownSlot;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Slot::ALL
            .into_iter()
            .find(|slot| slot.as_str() == s)
            .ok_or_else(|| UnknownSlot(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReactionError {
    #[error(transparent)]
    UnknownAgent(#[from] UnknownAgent),
    #[error("valence {0} is outside -5..=5")]
    ValenceOutOfRange(i32),
}

/// Per-agent emotion deltas produced by one occurrence, keyed by agent id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DeltaSet(BTreeMap<AgentId, Delta>);

impl DeltaSet {
    /// All-zero deltas for the given agents.
    pub fn zero(agents: &[AgentId]) -> DeltaSet {
        DeltaSet(agents.iter().map(|a| (a.clone(), Delta::ZERO)).collect())
    }

    pub fn get(&self, agent: &AgentId) -> Option<&Delta> {
        self.0.get(agent)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AgentId, &Delta)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.values().all(Delta::is_zero)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(AgentId, Delta)> for DeltaSet {
    fn from_iter<I: IntoIterator<Item = (AgentId, Delta)>>(iter: I) -> Self {
        DeltaSet(iter.into_iter().collect())
    }
}

/// The eight materialized matrices. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReactionSet {
    matrices: [Matrix; 8],
}

impl Default for ReactionSet {
    fn default() -> Self {
        let mut matrices = [Matrix::BASE; 8];
        for slot in Slot::ALL {
            matrices[slot.position()] = Matrix::tabulate(|a, v| slot.default_rule(a, v));
        }
        ReactionSet { matrices }
    }
}

impl ReactionSet {
    /// Shared instance with no overrides.
    pub fn standard() -> Arc<ReactionSet> {
        static STANDARD: OnceLock<Arc<ReactionSet>> = OnceLock::new();
        STANDARD.get_or_init(|| Arc::new(ReactionSet::default())).clone()
    }

    /// Default matrices with the given slots replaced.
    pub fn materialize(
        overrides: impl IntoIterator<Item = (Slot, Matrix)>,
    ) -> Result<ReactionSet, MatrixError> {
        let mut set = ReactionSet::default();
        for (slot, matrix) in overrides {
            let range = slot.value_range();
            if let Some((row, col, value)) = matrix.cells().find(|(_, _, v)| !range.contains(v)) {
                return Err(MatrixError::Range {
                    slot,
                    row,
                    col,
                    value,
                    min: *range.start(),
                    max: *range.end(),
                });
            }
            set.matrices[slot.position()] = matrix;
        }
        Ok(set)
    }

    pub fn matrix(&self, slot: Slot) -> &Matrix {
        &self.matrices[slot.position()]
    }

    fn at(&self, slot: Slot, affection: i32, valence: i32) -> i32 {
        self.matrix(slot).at(affection, valence)
    }

    /// Reactions to an event befalling `focal`: happiness only.
    pub fn event_deltas(
        &self,
        affections: &AffectionTable,
        focal: &AgentId,
        desirability: i32,
    ) -> Result<DeltaSet, ReactionError> {
        check_valence(desirability)?;
        affections.get(focal, focal)?;
        affections
            .agents()
            .iter()
            .map(|o| {
                let a = affections.get(o, focal)?.get();
                Ok((
                    o.clone(),
                    Delta {
                        happiness: self.at(Slot::EventHappiness, a, desirability),
                        ..Delta::ZERO
                    },
                ))
            })
            .collect()
    }

    /// Reactions to `focal` acquiring an object of the given appeal.
    pub fn object_deltas(
        &self,
        affections: &AffectionTable,
        focal: &AgentId,
        appeal: i32,
    ) -> Result<DeltaSet, ReactionError> {
        check_valence(appeal)?;
        affections.get(focal, focal)?;
        affections
            .agents()
            .iter()
            .map(|o| {
                let a = affections.get(o, focal)?.get();
                Ok((
                    o.clone(),
                    Delta {
                        happiness: self.at(Slot::ObjectHappiness, a, appeal),
                        anger: self.at(Slot::ObjectAnger, a, appeal),
                        pride: self.at(Slot::ObjectPride, a, appeal),
                    },
                ))
            })
            .collect()
    }

    /// Reactions to `performer` doing an action to `affected` (possibly themselves).
    ///
    /// The performer judges their own act through the pride matrix at their
    /// self-affection, feels no anger at it, and takes happiness from the
    /// perpetrator-happiness matrix. Everyone else reads happiness and anger
    /// by their affection toward the affected agent, and pride or shame by
    /// their affection toward the performer.
    pub fn action_deltas(
        &self,
        affections: &AffectionTable,
        performer: &AgentId,
        affected: &AgentId,
        plausibility: i32,
    ) -> Result<DeltaSet, ReactionError> {
        check_valence(plausibility)?;
        affections.get(performer, affected)?;
        affections
            .agents()
            .iter()
            .map(|o| {
                let to_affected = affections.get(o, affected)?.get();
                let to_performer = affections.get(o, performer)?.get();
                let delta = if o == performer {
                    Delta {
                        happiness: self.at(Slot::ActionPerpetratorHappiness, to_affected, plausibility),
                        anger: 0,
                        pride: self.at(Slot::ActionPerpetratorPride, to_performer, plausibility),
                    }
                } else {
                    Delta {
                        happiness: self.at(Slot::ActionAffectedHappiness, to_affected, plausibility),
                        anger: self.at(Slot::ActionPerpetratorAnger, to_affected, plausibility),
                        pride: self.at(Slot::ActionPerpetratorPride, to_performer, plausibility),
                    }
                };
                Ok((o.clone(), delta))
            })
            .collect()
    }
}

fn check_valence(v: i32) -> Result<(), ReactionError> {
    if (SCALE_MIN..=SCALE_MAX).contains(&v) {
        Ok(())
    } else {
        Err(ReactionError::ValenceOutOfRange(v))
    }
}
