//! Line-oriented occurrence scripts:
//!
//! ```text
//! event  <event_id>  to <agent_id>
//! object <object_id> to <agent_id>
//! action <action_id> by <agent_id> on <agent_id>
//! affection <agent_id> -> <agent_id> = <int>
//! ```
//!
//! Tokens are separated by whitespace; `#` starts a comment that runs to the
//! end of the line. Ids are checked for shape only, not resolved.

use std::fmt;

use super::Diagnostic;
use crate::model::{is_valid_token, AgentId, StimulusId, SCALE_MAX, SCALE_MIN};
use crate::engine::Occurrence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptStep {
    pub occurrence: Occurrence,
    /// 1-based source line.
    pub line: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Script {
    pub steps: Vec<ScriptStep>,
}

impl Script {
    pub fn occurrences(&self) -> impl Iterator<Item = &Occurrence> {
        self.steps.iter().map(|s| &s.occurrence)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl FromIterator<Occurrence> for Script {
    fn from_iter<I: IntoIterator<Item = Occurrence>>(iter: I) -> Self {
        Script {
            steps: iter
                .into_iter()
                .enumerate()
                .map(|(i, occurrence)| ScriptStep {
                    occurrence,
                    line: i + 1,
                })
                .collect(),
        }
    }
}

/// One statement per line, in order.
impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(f, "{}", step.occurrence)?;
        }
        Ok(())
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let body = match line.find('#') {
        Some(cut) => &line[..cut],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                tokens.push(Token {
                    text: &body[s..i],
                    column: body[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &body[s..],
            column: body[..s].chars().count() + 1,
        });
    }
    tokens
}

/// Parses a whole script, collecting diagnostics from every line.
pub fn parse_script(text: &str) -> Result<Script, Vec<Diagnostic>> {
    let mut steps = Vec::new();
    let mut diagnostics = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        match parse_line(line, line_no) {
            Ok(Some(occurrence)) => steps.push(ScriptStep {
                occurrence,
                line: line_no,
            }),
            Ok(None) => {}
            Err(d) => diagnostics.push(d),
        }
    }
    if diagnostics.is_empty() {
        Ok(Script { steps })
    } else {
        Err(diagnostics)
    }
}

/// Parses a single statement. Blank and comment-only input is an error here.
pub fn parse_occurrence(line: &str) -> Result<Occurrence, Diagnostic> {
    match parse_line(line, 1)? {
        Some(o) => Ok(o),
        None => Err(Diagnostic::error(1, 1, "SYNTAX", "expected a statement")),
    }
}

fn parse_line(line: &str, line_no: usize) -> Result<Option<Occurrence>, Diagnostic> {
    let tokens = tokenize(line);
    let Some(head) = tokens.first() else {
        return Ok(None);
    };
    let end_column = line.trim_end().chars().count() + 1;
    let err = |column: usize, code: &'static str, message: String| {
        Diagnostic::error(line_no, column, code, message)
    };

    let (shape, usage): (&[Slot], &str) = match head.text {
        "event" => (&[Slot::Stimulus, Slot::Word("to"), Slot::Agent], "event <event_id> to <agent_id>"),
        "object" => (&[Slot::Stimulus, Slot::Word("to"), Slot::Agent], "object <object_id> to <agent_id>"),
        "action" => (
            &[Slot::Stimulus, Slot::Word("by"), Slot::Agent, Slot::Word("on"), Slot::Agent],
            "action <action_id> by <agent_id> on <agent_id>",
        ),
        "affection" => (
            &[Slot::Agent, Slot::Word("->"), Slot::Agent, Slot::Word("="), Slot::Int],
            "affection <agent_id> -> <agent_id> = <int>",
        ),
        other => {
            return Err(err(
                head.column,
                "UNKNOWN_KEYWORD",
                format!("unknown statement `{other}`; expected event, object, action or affection"),
            ))
        }
    };

    let args = &tokens[1..];
    if args.len() != shape.len() {
        let column = args.get(shape.len()).map_or(end_column, |t| t.column);
        return Err(err(
            column,
            "ARITY",
            format!(
                "`{}` takes {} arguments, found {}; usage: {usage}",
                head.text,
                shape.len(),
                args.len()
            ),
        ));
    }

    let mut ids = Vec::new();
    let mut int = 0;
    for (slot, tok) in shape.iter().zip(args) {
        match slot {
            Slot::Word(w) if tok.text != *w => {
                return Err(err(
                    tok.column,
                    "SYNTAX",
                    format!("expected `{w}`, found `{}`; usage: {usage}", tok.text),
                ))
            }
            Slot::Word(_) => {}
            Slot::Stimulus | Slot::Agent => {
                if !is_valid_token(tok.text) {
                    return Err(err(
                        tok.column,
                        "SYNTAX",
                        format!(
                            "invalid id `{}`: expected [a-z][a-z0-9_]* of at most 32 characters",
                            tok.text
                        ),
                    ));
                }
                ids.push(tok.text);
            }
            Slot::Int => {
                int = tok
                    .text
                    .parse::<i32>()
                    .ok()
                    .filter(|v| (SCALE_MIN..=SCALE_MAX).contains(v))
                    .ok_or_else(|| {
                        err(
                            tok.column,
                            "SYNTAX",
                            format!("expected an integer in -5..=5, found `{}`", tok.text),
                        )
                    })?;
            }
        }
    }

    let agent = |s: &str| AgentId::new(s).expect("token shape checked");
    let stimulus = |s: &str| StimulusId::new(s).expect("token shape checked");
    let occurrence = match head.text {
        "event" => Occurrence::Event {
            id: stimulus(ids[0]),
            to: agent(ids[1]),
        },
        "object" => Occurrence::Object {
            id: stimulus(ids[0]),
            to: agent(ids[1]),
        },
        "action" => Occurrence::Action {
            id: stimulus(ids[0]),
            by: agent(ids[1]),
            on: agent(ids[2]),
        },
        _ => Occurrence::Affection {
            from: agent(ids[0]),
            to: agent(ids[1]),
            value: int,
        },
    };
    Ok(Some(occurrence))
}

enum Slot {
    Word(&'static str),
    Stimulus,
    Agent,
    Int,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statements() {
        let script = parse_script(
            "# opening\n\nevent fathers_wrath to desdemona\naction betrayal by iago on iago  # self\naffection iago -> desdemona = +2\nobject ring to desdemona\n",
        )
        .unwrap();
        let lines: Vec<_> = script.steps.iter().map(|s| s.line).collect();
        assert_eq!(lines, [3, 4, 5, 6]);
        assert_eq!(script.steps[1].occurrence.to_string(), "action betrayal by iago on iago");
        assert!(matches!(
            &script.steps[2].occurrence,
            Occurrence::Affection { value: 2, .. }
        ));
    }

    #[test]
    fn missing_to_is_arity() {
        let diags = parse_script("event storm to iago\nobject ring desdemona\n").unwrap_err();
        assert_eq!(diags.len(), 1);
        assert_eq!((diags[0].code, diags[0].line, diags[0].column), ("ARITY", 2, 22));
    }

    #[test]
    fn diagnostics_per_line() {
        let diags = parse_script("dance iago\nevent storm at iago\naffection a -> b = 7\nevent Storm to iago\n").unwrap_err();
        let got: Vec<_> = diags.iter().map(|d| (d.code, d.line, d.column)).collect();
        assert_eq!(
            got,
            [("UNKNOWN_KEYWORD", 1, 1), ("SYNTAX", 2, 13), ("SYNTAX", 3, 20), ("SYNTAX", 4, 7)]
        );
    }

    #[test]
    fn too_many_arguments_points_at_extra() {
        let d = parse_occurrence("event storm to iago now").unwrap_err();
        assert_eq!((d.code, d.column), ("ARITY", 21));
    }

    #[test]
    fn display_round_trip() {
        let text = "event a to b\nobject c to d\naction e by f on g\naffection h -> i = -3\n";
        let script = parse_script(text).unwrap();
        assert_eq!(script.to_string(), text);
    }
}
