//! Text renderings of diffs and maps: canonical JSON, fixed-width tables,
//! and rows of ASCII faces.

use std::fmt::Write as _;

use occsim_core::{face_label, Direction, EmotionKind, EmotionLabel, EmotionalMap, StateDiff};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
    Faces,
}

const HAPPINESS_FACES: [&str; 11] = [
    "T_T", ";_;", ":'(", ":((", ":( ", ":| ", ":) ", ":))", ":D ", "XD ", "\\o/",
];
const ANGER_FACES: [&str; 6] = ["-_-", "-_o", "o_o", ">_<", ">:(", ">:O"];
const PRIDE_FACES: [&str; 11] = [
    "v_v", "v.v", "u_u", "._.", "'.'", "-.-", "^.^", "^_^", "^o^", "*_*", "B-)",
];

/// Three-character face for an emotion label.
pub fn face_glyph(label: &EmotionLabel) -> &'static str {
    let faces: &[&str] = match label.kind {
        EmotionKind::Happiness => &HAPPINESS_FACES,
        EmotionKind::Anger => &ANGER_FACES,
        EmotionKind::Pride => &PRIDE_FACES,
    };
    faces[label.face_index]
}

fn describe(label: &EmotionLabel) -> String {
    match label.label {
        Some(name) => format!("{}={} ({name})", label.kind, label.value),
        None => format!("{}={}", label.kind, label.value),
    }
}

#[derive(Serialize)]
pub struct RunStep<'a> {
    pub line: usize,
    pub state_diff: &'a StateDiff,
}

#[derive(Serialize)]
struct RunDocument<'a> {
    steps: &'a [RunStep<'a>],
    emotional_map: &'a EmotionalMap,
}

pub fn run_output(format: Format, steps: &[RunStep<'_>], map: &EmotionalMap) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&RunDocument {
                steps,
                emotional_map: map,
            })
            .expect("run document serializes");
            s.push('\n');
            s
        }
        Format::Table => {
            let mut s = String::new();
            for step in steps {
                s.push_str(&diff_table(step.line, step.state_diff));
                s.push('\n');
            }
            s.push_str(&map_table(map));
            s
        }
        Format::Faces => {
            let mut s = String::new();
            for step in steps {
                s.push_str(&diff_table(step.line, step.state_diff));
                s.push('\n');
            }
            s.push_str(&map_faces(map));
            s
        }
    }
}

pub fn diff_table(line: usize, diff: &StateDiff) -> String {
    let mut s = String::new();
    let verb = match diff.direction {
        Direction::Apply => "apply",
        Direction::Undo => "undo",
    };
    let _ = writeln!(s, "#{} {verb} (line {line}): {}", diff.sequence, diff.occurrence);
    let _ = writeln!(s, "  {:<12} {:>15} {:>15} {:>15}", "agent", "happiness", "anger", "pride");
    for a in &diff.agents {
        let cell = |k: EmotionKind| {
            format!("{:>3} {:+3} -> {:>3}", a.before.get(k), a.delta.get(k), a.after.get(k))
        };
        let _ = writeln!(
            s,
            "  {:<12} {:>15} {:>15} {:>15}",
            a.agent.as_str(),
            cell(EmotionKind::Happiness),
            cell(EmotionKind::Anger),
            cell(EmotionKind::Pride)
        );
    }
    s
}

pub fn map_table(map: &EmotionalMap) -> String {
    let mut s = String::from("emotional map\n");
    let _ = writeln!(
        s,
        "  {:<12} {:>9} {:>5} {:>5}  primary",
        "agent", "happiness", "anger", "pride"
    );
    for a in &map.agents {
        let _ = writeln!(
            s,
            "  {:<12} {:>9} {:>5} {:>5}  {}",
            a.id.as_str(),
            a.emotions.happiness(),
            a.emotions.anger(),
            a.emotions.pride(),
            describe(&a.primary)
        );
    }
    s.push_str("affections\n");
    for a in &map.agents {
        for e in &a.affections {
            let row = format!(
                "  {:<12} -> {:<12} {:>3}  {}",
                a.id.as_str(),
                e.to.as_str(),
                e.value,
                e.glyph.ascii()
            );
            let _ = writeln!(s, "{}", row.trim_end());
        }
    }
    s
}

pub fn map_faces(map: &EmotionalMap) -> String {
    let mut s = String::new();
    for a in &map.agents {
        let _ = writeln!(
            s,
            "{:<12} [{}] primary {}",
            a.id.as_str(),
            face_glyph(&a.primary),
            describe(&a.primary)
        );
        for kind in EmotionKind::ALL {
            let label = face_label(kind, a.emotions.get(kind)).expect("state is in range");
            let _ = writeln!(
                s,
                "{:<12}  [{}] face {:>2}  {}",
                "",
                face_glyph(&label),
                label.face_index,
                describe(&label)
            );
        }
    }
    s
}

/// One line per agent: primary face and value.
pub fn primary_faces(map: &EmotionalMap) -> String {
    let mut s = String::new();
    for a in &map.agents {
        let _ = writeln!(
            s,
            "{:<12} [{}] {}",
            a.id.as_str(),
            face_glyph(&a.primary),
            describe(&a.primary)
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_sets_cover_every_value() {
        for kind in EmotionKind::ALL {
            let r = kind.range();
            let glyphs: std::collections::HashSet<_> = r
                .clone()
                .map(|v| face_glyph(&face_label(kind, v).unwrap()))
                .collect();
            assert_eq!(glyphs.len(), kind.face_count());
            assert!(glyphs.iter().all(|g| g.chars().count() == 3));
        }
    }
}
