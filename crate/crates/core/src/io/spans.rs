//! Source positions of values in a JSON document, keyed by field path
//! (`agents[1].avatar.hair_color`). Only run on text serde_json accepted.

use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl Position {
    const START: Position = Position { line: 1, column: 1 };
}

#[derive(Debug, Default)]
pub struct SpanIndex {
    values: HashMap<String, Position>,
}

impl SpanIndex {
    pub fn build(text: &str) -> SpanIndex {
        let mut scanner = Scanner {
            bytes: text.as_bytes(),
            at: 0,
            line: 1,
            column: 1,
            index: SpanIndex::default(),
        };
        scanner.skip_ws();
        scanner.value(String::new());
        scanner.index
    }

    /// Position of the value at `path`, falling back to the nearest enclosing
    /// value that exists (so a missing field points at its parent object).
    pub fn locate(&self, path: &str) -> Position {
        let mut p = path;
        loop {
            if let Some(pos) = self.values.get(p) {
                return *pos;
            }
            match p.rfind(['.', '[']) {
                Some(cut) => p = &p[..cut],
                None => return self.values.get("").copied().unwrap_or(Position::START),
            }
        }
    }
}

struct Scanner<'a> {
    bytes: &'a [u8],
    at: usize,
    line: usize,
    column: usize,
    index: SpanIndex,
}

impl Scanner<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.at).copied()
    }

    fn bump(&mut self) {
        if let Some(b) = self.peek() {
            self.at += 1;
            if b == b'\n' {
                self.line += 1;
                self.column = 1;
            } else if b & 0xC0 != 0x80 {
                self.column += 1;
            }
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.bump();
        }
    }

    fn position(&self) -> Position {
        Position {
            line: self.line,
            column: self.column,
        }
    }

    fn value(&mut self, path: String) {
        self.index.values.insert(path.clone(), self.position());
        match self.peek() {
            Some(b'{') => self.object(&path),
            Some(b'[') => self.array(&path),
            Some(b'"') => {
                self.string();
            }
            _ => {
                while matches!(self.peek(), Some(b) if !matches!(b, b',' | b'}' | b']' | b' ' | b'\t' | b'\n' | b'\r'))
                {
                    self.bump();
                }
            }
        }
    }

    fn string(&mut self) -> String {
        let start = self.at + 1;
        self.bump();
        while let Some(b) = self.peek() {
            match b {
                b'\\' => {
                    self.bump();
                    self.bump();
                }
                b'"' => break,
                _ => self.bump(),
            }
        }
        let raw = &self.bytes[start..self.at.min(self.bytes.len())];
        self.bump();
        // keys in this format never need unescaping to match field names
        String::from_utf8_lossy(raw).into_owned()
    }

    fn object(&mut self, path: &str) {
        self.bump();
        self.skip_ws();
        if self.peek() == Some(b'}') {
            self.bump();
            return;
        }
        loop {
            self.skip_ws();
            let key = self.string();
            self.skip_ws();
            self.bump(); // ':'
            self.skip_ws();
            let child = if path.is_empty() {
                key
            } else {
                format!("{path}.{key}")
            };
            self.value(child);
            self.skip_ws();
            match self.peek() {
                Some(b',') => self.bump(),
                _ => {
                    self.bump();
                    return;
                }
            }
        }
    }

    fn array(&mut self, path: &str) {
        self.bump();
        self.skip_ws();
        if self.peek() == Some(b']') {
            self.bump();
            return;
        }
        let mut i = 0;
        loop {
            self.skip_ws();
            self.value(format!("{path}[{i}]"));
            i += 1;
            self.skip_ws();
            match self.peek() {
                Some(b',') => self.bump(),
                _ => {
                    self.bump();
                    return;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn locates_nested_values() {
        let text = "{\n  \"a\": [1, {\"b\": \"x\\\"y\"}],\n  \"é\": {\"c\": true}\n}";
        let idx = SpanIndex::build(text);
        assert_eq!(idx.locate(""), Position { line: 1, column: 1 });
        assert_eq!(idx.locate("a"), Position { line: 2, column: 8 });
        assert_eq!(idx.locate("a[0]"), Position { line: 2, column: 9 });
        assert_eq!(idx.locate("a[1].b"), Position { line: 2, column: 18 });
        assert_eq!(idx.locate("é.c"), Position { line: 3, column: 14 });
        // missing child falls back to parent
        assert_eq!(idx.locate("a[1].zzz"), Position { line: 2, column: 12 });
        assert_eq!(idx.locate("nope[3].x"), Position { line: 1, column: 1 });
    }
}
