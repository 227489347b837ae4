use std::io::Write;
use std::str::FromStr;

use crate::dialog::{DialogState, SystemAction};

/// Turn logging to standard error, selected by `DIALOG_LOG`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum LogMode {
    #[default]
    Off,
    /// The two transcript lines of every turn.
    Transcript,
    /// Transcript lines plus the DRS box and the open goals.
    Debug,
}

impl FromStr for LogMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "" | "off" => Ok(LogMode::Off),
            "transcript" => Ok(LogMode::Transcript),
            "debug" => Ok(LogMode::Debug),
            other => Err(format!("DIALOG_LOG must be off, transcript or debug, not `{other}`")),
        }
    }
}

impl LogMode {
    /// Reads `DIALOG_LOG`; unset or unrecognized values turn logging off.
    pub fn from_env() -> Self {
        std::env::var("DIALOG_LOG")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or_default()
    }

    pub fn log_turn(self, session: &str, st: &DialogState, action: &SystemAction) {
        if self == LogMode::Off {
            return;
        }
        let mut err = std::io::stderr().lock();
        let _ = self.write_turn(&mut err, session, st, action);
    }

    pub fn write_turn(
        self,
        out: &mut impl Write,
        session: &str,
        st: &DialogState,
        action: &SystemAction,
    ) -> std::io::Result<()> {
        if self == LogMode::Off {
            return Ok(());
        }
        let lines: Vec<&crate::dialog::HistoryEntry> =
            st.history.iter().filter(|e| e.turn == st.turn).collect();
        for e in lines {
            let speaker = match e.speaker {
                crate::dialog::Speaker::User => "user",
                crate::dialog::Speaker::System => "system",
            };
            writeln!(out, "[{session}] {}\t{speaker}\t{}\t{}", e.turn, e.act, e.text)?;
        }
        if self == LogMode::Debug {
            writeln!(out, "[{session}] action: {}", action.kind())?;
            if let Some(d) = &st.last_drs {
                for l in d.render_box().lines() {
                    writeln!(out, "[{session}]   {l}")?;
                }
            }
            for g in st.open_goals() {
                writeln!(out, "[{session}] goal: {}", g.key())?;
            }
        }
        Ok(())
    }
}
