//! Line-at-a-time occurrence loop.
//!
//! Each input line is either a script statement or one of the built-ins
//! `undo`, `map`, `help` and `quit`. Errors are reported and the loop keeps
//! going; end of input behaves like `quit`.

use std::io::{self, BufRead, IsTerminal, Write};

use occsim_core::{parse_occurrence, Session};

use crate::render;

const HELP: &str = "\
statements:
  event <id> to <agent>
  object <id> to <agent>
  action <id> by <agent> on <agent>
  affection <agent> -> <agent> = <value>
built-ins: undo, map, help, quit
";

pub fn run(mut session: Session, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<()> {
    let interactive = io::stdin().is_terminal() && io::stdout().is_terminal();
    let mut buf = String::new();
    let mut line_no = 0;
    loop {
        if interactive {
            write!(out, "> ")?;
            out.flush()?;
        }
        buf.clear();
        if input.read_line(&mut buf)? == 0 {
            return Ok(());
        }
        line_no += 1;
        let line = buf.trim();
        match line {
            "" => {}
            _ if line.starts_with('#') => {}
            "quit" | "exit" => return Ok(()),
            "help" => write!(out, "{HELP}")?,
            "map" => write!(out, "{}", render::map_faces(&session.emotional_map()))?,
            "undo" => match session.undo() {
                Ok(diff) => {
                    write!(out, "{}", render::diff_table(line_no, &diff))?;
                    write!(out, "{}", render::primary_faces(&session.emotional_map()))?;
                }
                Err(e) => writeln!(err, "<stdin>:{line_no}:1 {} {e}", e.code())?,
            },
            _ => match parse_occurrence(line) {
                Ok(occurrence) => match session.apply(occurrence) {
                    Ok(diff) => {
                        write!(out, "{}", render::diff_table(line_no, &diff))?;
                        write!(out, "{}", render::primary_faces(&session.emotional_map()))?;
                    }
                    Err(e) => writeln!(err, "<stdin>:{line_no}:1 {} {e}", e.code())?,
                },
                Err(d) => writeln!(err, "<stdin>:{line_no}:{} {} {}", d.column, d.code, d.message)?,
            },
        }
        out.flush()?;
    }
}
