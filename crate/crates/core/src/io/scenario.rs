use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

use super::spans::SpanIndex;
use super::Diagnostic;
use crate::model::{
    validate_scenario, AffectionDraft, AgentDraft, AgentLimit, AvatarDraft, Scenario,
    ScenarioDraft, StimulusDraft, StimulusKind,
};

/// Current scenario document version.
pub const FORMAT_VERSION: i64 = 1;

const TOP_LEVEL: [&str; 6] = ["version", "agents", "affections", "events", "objects", "actions"];

/// A successfully parsed value plus any non-fatal diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<Diagnostic>,
}

/// Parses and validates a scenario document, reporting every problem found.
pub fn parse_scenario(text: &str, limit: AgentLimit) -> Result<Parsed<Scenario>, Vec<Diagnostic>> {
    if text.trim().is_empty() {
        return Err(vec![Diagnostic::error(
            1,
            1,
            "EMPTY_DOCUMENT",
            "scenario document is empty",
        )]);
    }
    let root: Value = serde_json::from_str(text).map_err(|e| {
        vec![Diagnostic::error(
            e.line().max(1),
            e.column().max(1),
            "JSON_SYNTAX",
            strip_position(&e.to_string()),
        )]
    })?;
    let spans = SpanIndex::build(text);
    let mut reader = Reader {
        spans: &spans,
        diagnostics: Vec::new(),
    };
    let draft = reader.document(&root);
    if !reader.diagnostics.is_empty() {
        return Err(reader.diagnostics);
    }
    let draft = draft.expect("a draft is produced when no diagnostics were raised");

    let scenario = validate_scenario(&draft, limit).map_err(|errors| {
        errors
            .0
            .iter()
            .map(|e| {
                let pos = spans.locate(e.path());
                Diagnostic::error(pos.line, pos.column, e.code(), e.to_string())
            })
            .collect::<Vec<_>>()
    })?;

    Ok(Parsed {
        value: scenario,
        warnings: duplicate_name_warnings(&draft, &spans),
    })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(cut) => msg[..cut].to_owned(),
        None => msg.to_owned(),
    }
}

fn duplicate_name_warnings(draft: &ScenarioDraft, spans: &SpanIndex) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut check = |field: &str, names: Vec<&str>| {
        let mut seen = BTreeMap::new();
        for (i, name) in names.into_iter().enumerate() {
            if let Some(first) = seen.insert(name, i) {
                let pos = spans.locate(&format!("{field}[{i}].name"));
                out.push(Diagnostic::warning(
                    pos.line,
                    pos.column,
                    "DUPLICATE_NAME",
                    format!("name {name:?} is also used by {field}[{first}]"),
                ));
            }
        }
    };
    check("agents", draft.agents.iter().map(|a| a.name.as_str()).collect());
    for kind in [StimulusKind::Event, StimulusKind::Object, StimulusKind::Action] {
        check(
            kind.catalog_field(),
            draft.stimuli(kind).iter().map(|s| s.name.as_str()).collect(),
        );
    }
    out
}

struct Reader<'a> {
    spans: &'a SpanIndex,
    diagnostics: Vec<Diagnostic>,
}

impl Reader<'_> {
    fn report(&mut self, path: &str, code: &'static str, message: String) {
        let pos = self.spans.locate(path);
        self.diagnostics
            .push(Diagnostic::error(pos.line, pos.column, code, message));
    }

    fn object<'v>(&mut self, value: &'v Value, path: &str, fields: &[&str]) -> Option<&'v Map<String, Value>> {
        let Some(obj) = value.as_object() else {
            self.report(path, "SCHEMA", format!("{} must be an object", display(path)));
            return None;
        };
        for key in obj.keys() {
            if !fields.contains(&key.as_str()) {
                let child = join(path, key);
                self.report(&child, "UNKNOWN_FIELD", format!("unknown field `{child}`"));
            }
        }
        Some(obj)
    }

    fn field<'v>(&mut self, obj: &'v Map<String, Value>, path: &str, key: &str) -> Option<&'v Value> {
        let v = obj.get(key);
        if v.is_none() {
            self.report(path, "SCHEMA", format!("missing field `{}`", join(path, key)));
        }
        v
    }

    fn string(&mut self, obj: &Map<String, Value>, path: &str, key: &str) -> Option<String> {
        let v = self.field(obj, path, key)?;
        let p = join(path, key);
        match v.as_str() {
            Some(s) => Some(s.to_owned()),
            None => {
                self.report(&p, "SCHEMA", format!("`{p}` must be a string"));
                None
            }
        }
    }

    fn integer(&mut self, obj: &Map<String, Value>, path: &str, key: &str) -> Option<i64> {
        let v = self.field(obj, path, key)?;
        let p = join(path, key);
        match v.as_i64() {
            Some(n) => Some(n),
            None => {
                self.report(&p, "SCHEMA", format!("`{p}` must be an integer"));
                None
            }
        }
    }

    fn boolean(&mut self, obj: &Map<String, Value>, path: &str, key: &str) -> Option<bool> {
        let v = self.field(obj, path, key)?;
        let p = join(path, key);
        match v.as_bool() {
            Some(b) => Some(b),
            None => {
                self.report(&p, "SCHEMA", format!("`{p}` must be true or false"));
                None
            }
        }
    }

    fn array<'v>(&mut self, obj: &'v Map<String, Value>, key: &str, required: bool) -> Option<&'v [Value]> {
        match obj.get(key) {
            None if required => {
                self.report("", "SCHEMA", format!("missing field `{key}`"));
                None
            }
            None => Some(&[]),
            Some(Value::Array(items)) => Some(items),
            Some(_) => {
                self.report(key, "SCHEMA", format!("`{key}` must be an array"));
                None
            }
        }
    }

    fn document(&mut self, root: &Value) -> Option<ScenarioDraft> {
        let obj = self.object(root, "", &TOP_LEVEL)?;
        match obj.get("version") {
            None => self.report("", "SCHEMA", "missing field `version`".into()),
            Some(v) if v.as_i64() == Some(FORMAT_VERSION) => {}
            Some(v) => self.report(
                "version",
                "UNSUPPORTED_VERSION",
                format!("unsupported version {v}; expected {FORMAT_VERSION}"),
            ),
        }

        let mut agents = Vec::new();
        for (i, item) in self.array(obj, "agents", true).unwrap_or_default().iter().enumerate() {
            let path = format!("agents[{i}]");
            let Some(a) = self.object(item, &path, &["id", "name", "avatar"]) else {
                continue;
            };
            let id = self.string(a, &path, "id");
            let name = self.string(a, &path, "name");
            let avatar = self.field(a, &path, "avatar").and_then(|v| {
                let p = format!("{path}.avatar");
                let av = self.object(v, &p, &["hair_style", "hair_color", "glasses"])?;
                let hair_style = self.string(av, &p, "hair_style");
                let hair_color = self.string(av, &p, "hair_color");
                let glasses = self.boolean(av, &p, "glasses");
                Some(AvatarDraft {
                    hair_style: hair_style?,
                    hair_color: hair_color?,
                    glasses: glasses?,
                })
            });
            if let (Some(id), Some(name), Some(avatar)) = (id, name, avatar) {
                agents.push(AgentDraft { id, name, avatar });
            }
        }

        let mut affections = Vec::new();
        for (i, item) in self.array(obj, "affections", true).unwrap_or_default().iter().enumerate() {
            let path = format!("affections[{i}]");
            let Some(a) = self.object(item, &path, &["from", "to", "value"]) else {
                continue;
            };
            let from = self.string(a, &path, "from");
            let to = self.string(a, &path, "to");
            let value = self.integer(a, &path, "value");
            if let (Some(from), Some(to), Some(value)) = (from, to, value) {
                affections.push(AffectionDraft { from, to, value });
            }
        }

        let mut catalogs = Vec::new();
        for kind in [StimulusKind::Event, StimulusKind::Object, StimulusKind::Action] {
            let field = kind.catalog_field();
            let mut defs = Vec::new();
            for (i, item) in self.array(obj, field, false).unwrap_or_default().iter().enumerate() {
                let path = format!("{field}[{i}]");
                let Some(s) = self.object(item, &path, &["id", "name", "value"]) else {
                    continue;
                };
                let id = self.string(s, &path, "id");
                let name = self.string(s, &path, "name");
                let value = self.integer(s, &path, "value");
                if let (Some(id), Some(name), Some(value)) = (id, name, value) {
                    defs.push(StimulusDraft { id, name, value });
                }
            }
            catalogs.push(defs);
        }
        let actions = catalogs.pop().unwrap_or_default();
        let objects = catalogs.pop().unwrap_or_default();
        let events = catalogs.pop().unwrap_or_default();

        Some(ScenarioDraft {
            agents,
            affections,
            events,
            objects,
            actions,
        })
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_owned()
    } else {
        format!("{path}.{key}")
    }
}

fn display(path: &str) -> &str {
    if path.is_empty() {
        "document"
    } else {
        path
    }
}

#[derive(Serialize)]
struct Document<'a> {
    version: i64,
    agents: Vec<AgentDoc<'a>>,
    affections: Vec<AffectionDoc<'a>>,
    events: Vec<StimulusDoc<'a>>,
    objects: Vec<StimulusDoc<'a>>,
    actions: Vec<StimulusDoc<'a>>,
}

#[derive(Serialize)]
struct AgentDoc<'a> {
    id: &'a str,
    name: &'a str,
    avatar: AvatarDoc<'a>,
}

#[derive(Serialize)]
struct AvatarDoc<'a> {
    hair_style: &'a str,
    hair_color: &'a str,
    glasses: bool,
}

#[derive(Serialize)]
struct AffectionDoc<'a> {
    from: &'a str,
    to: &'a str,
    value: i64,
}

#[derive(Serialize)]
struct StimulusDoc<'a> {
    id: &'a str,
    name: &'a str,
    value: i64,
}

fn stimulus_docs(list: &[StimulusDraft]) -> Vec<StimulusDoc<'_>> {
    list.iter()
        .map(|s| StimulusDoc {
            id: &s.id,
            name: &s.name,
            value: s.value,
        })
        .collect()
}

/// Canonical text: ids sorted, fixed key order, two-space indent, trailing newline.
pub fn serialize_scenario(scenario: &Scenario) -> String {
    let draft = scenario.to_draft();
    let doc = Document {
        version: FORMAT_VERSION,
        agents: draft
            .agents
            .iter()
            .map(|a| AgentDoc {
                id: &a.id,
                name: &a.name,
                avatar: AvatarDoc {
                    hair_style: &a.avatar.hair_style,
                    hair_color: &a.avatar.hair_color,
                    glasses: a.avatar.glasses,
                },
            })
            .collect(),
        affections: draft
            .affections
            .iter()
            .map(|e| AffectionDoc {
                from: &e.from,
                to: &e.to,
                value: e.value,
            })
            .collect(),
        events: stimulus_docs(&draft.events),
        objects: stimulus_docs(&draft.objects),
        actions: stimulus_docs(&draft.actions),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
  "version": 1,
  "agents": [
    {"id": "bella", "name": "Bella", "avatar": {"hair_style": "long", "hair_color": "brown", "glasses": false}},
    {"id": "edward", "name": "Edward", "avatar": {"hair_style": "short", "hair_color": "auburn", "glasses": false}}
  ],
  "affections": [
    {"from": "bella", "to": "edward", "value": 5},
    {"from": "edward", "to": "bella", "value": 5}
  ],
  "events": [{"id": "prom", "name": "Prom night", "value": 9}]
}"#;

    #[test]
    fn valence_range_is_located() {
        let diags = parse_scenario(MINIMAL, AgentLimit::Strict).unwrap_err();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, "VALENCE_RANGE");
        assert_eq!((diags[0].line, diags[0].column), (11, 60));
    }

    #[test]
    fn empty_document() {
        let diags = parse_scenario("  \n", AgentLimit::Strict).unwrap_err();
        assert_eq!(diags[0].line, 1);
        assert_eq!(diags[0].code, "EMPTY_DOCUMENT");
    }

    #[test]
    fn syntax_error_has_position() {
        let diags = parse_scenario("{\n  \"version\": 1,,\n}", AgentLimit::Strict).unwrap_err();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, "JSON_SYNTAX");
        assert_eq!(diags[0].line, 2);
    }

    #[test]
    fn schema_errors_are_all_reported() {
        let text = r#"{"version": 2, "agents": [{"id": 3, "name": "A"}], "affections": {}, "extra": 1}"#;
        let diags = parse_scenario(text, AgentLimit::Strict).unwrap_err();
        let codes: Vec<_> = diags.iter().map(|d| d.code).collect();
        assert_eq!(codes, ["UNKNOWN_FIELD", "UNSUPPORTED_VERSION", "SCHEMA", "SCHEMA", "SCHEMA"]);
    }

    #[test]
    fn duplicate_names_warn() {
        let text = MINIMAL.replace("\"value\": 9", "\"value\": 3").replace("\"Edward\"", "\"Bella\"");
        let parsed = parse_scenario(&text, AgentLimit::Strict).unwrap();
        assert_eq!(parsed.warnings.len(), 1);
        assert_eq!(parsed.warnings[0].code, "DUPLICATE_NAME");
        assert_eq!(parsed.warnings[0].line, 5);
    }

    #[test]
    fn serialize_is_a_fixed_point() {
        let text = MINIMAL.replace("\"value\": 9", "\"value\": 3");
        let s = parse_scenario(&text, AgentLimit::Strict).unwrap().value;
        let once = serialize_scenario(&s);
        let again = parse_scenario(&once, AgentLimit::Strict).unwrap().value;
        assert_eq!(again, s);
        assert_eq!(serialize_scenario(&again), once);
        let keys: Vec<_> = TOP_LEVEL.iter().map(|k| once.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }
}
