//! Deterministic report rendering for the CLI: a plain text mode and a
//! tab-separated key-value mode. Same inputs always render byte-identical
//! output.

use crate::automaton::Level;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Kv,
}

/// A command's structured output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub results: Vec<(String, String)>,
    pub notes: Vec<String>,
    pub level: Level,
}

impl Report {
    pub fn new(command: &str, level: Level) -> Self {
        Report {
            command: command.to_string(),
            inputs: Vec::new(),
            results: Vec::new(),
            notes: Vec::new(),
            level,
        }
    }

    pub fn input(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.inputs.push((name.to_string(), value.to_string()));
        self
    }

    pub fn result(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.results.push((name.to_string(), value.to_string()));
        self
    }

    pub fn note(&mut self, text: impl ToString) -> &mut Self {
        self.notes.push(text.to_string());
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Kv => self.render_kv(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("level: {}\n", self.level));
        for (name, value) in &self.inputs {
            out.push_str(&format!("input: {name}={value}\n"));
        }
        for (name, value) in &self.results {
            out.push_str(&format!("{name}: {value}\n"));
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }

    fn render_kv(&self) -> String {
        let mut out = String::new();
        for (name, value) in &self.results {
            out.push_str(&format!("{name}\t{value}\n"));
        }
        for note in &self.notes {
            out.push_str(&format!("note\t{note}\n"));
        }
        out
    }
}
