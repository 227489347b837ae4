use std::io::{self, BufRead, Write};

use super::log::LogMode;
use crate::dialog::{DialogEngine, DialogState};

fn dump_state(out: &mut impl Write, st: &DialogState) -> io::Result<()> {
    let goals: Vec<String> = st
        .open_goals()
        .map(|g| {
            let sorts: Vec<String> = g.var_sorts.iter().map(|(v, s)| format!("{v}: {s}")).collect();
            format!("{} [{}]", g.key(), sorts.join(", "))
        })
        .collect();
    if goals.is_empty() {
        writeln!(out, "open goals: none")?;
    } else {
        writeln!(out, "open goals: {}", goals.join("; "))?;
    }
    writeln!(out, "shared knowledge:")?;
    for lit in st.shared.literals() {
        writeln!(out, "  {lit}")?;
    }
    Ok(())
}

/// Runs a dialog over `input`: prompts `user> `, answers with
/// `system[<act>]> <text>`. `:state` prints the open goals and the shared
/// knowledge, `:quit` (or end of input) stops. Returns the final state.
pub fn run_repl(
    engine: &DialogEngine,
    input: impl BufRead,
    mut output: impl Write,
    log: LogMode,
) -> io::Result<DialogState> {
    let mut st = engine.new_state();
    let mut lines = input.lines();
    loop {
        write!(output, "user> ")?;
        output.flush()?;
        let Some(line) = lines.next() else {
            writeln!(output)?;
            break;
        };
        let line = line?;
        let text = line.trim();
        match text {
            "" => continue,
            ":quit" => break,
            ":state" => dump_state(&mut output, &st)?,
            _ => {
                let action = engine.turn(&mut st, text);
                log.log_turn("repl", &st, &action);
                writeln!(output, "system[{}]> {}", action.act(), action.text())?;
            }
        }
    }
    Ok(st)
}
