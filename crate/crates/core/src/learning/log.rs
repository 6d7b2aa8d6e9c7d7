use std::fmt::{self, Write as _};

use crate::series::Label;

/// Search direction of a hill-climbing run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Grow band segments.
    Forward,
    /// Shrink band segments.
    Backward,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        })
    }
}

/// One heuristic evaluation made by the hill-climber.
#[derive(Clone, Debug, PartialEq)]
pub struct LearnEvent {
    /// Index of the hill-climbing run within the log.
    pub run: usize,
    /// Evaluation index within the run.
    pub step: usize,
    pub direction: Direction,
    pub start: usize,
    pub end: usize,
    pub label: Label,
    pub before: f64,
    pub after: f64,
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq)]
enum Line {
    Note(String),
    Event(LearnEvent),
}

/// Ordered record of a learning session, written as tab-separated text.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LearningLog {
    lines: Vec<Line>,
    runs: usize,
}

impl LearningLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.lines.push(Line::Note(text.into()));
    }

    pub(crate) fn start_run(&mut self) -> usize {
        self.runs += 1;
        self.runs - 1
    }

    pub(crate) fn push(&mut self, event: LearnEvent) {
        self.lines.push(Line::Event(event));
    }

    pub fn events(&self) -> impl Iterator<Item = &LearnEvent> {
        self.lines.iter().filter_map(|l| match l {
            Line::Event(e) => Some(e),
            Line::Note(_) => None,
        })
    }

    pub fn notes(&self) -> impl Iterator<Item = &str> {
        self.lines.iter().filter_map(|l| match l {
            Line::Note(n) => Some(n.as_str()),
            Line::Event(_) => None,
        })
    }

    /// Number of hill-climbing runs recorded.
    pub fn runs(&self) -> usize {
        self.runs
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("run\tstep\tdirection\tstart\tend\tlabel\tbefore\tafter\taccepted\n");
        for line in &self.lines {
            match line {
                Line::Note(text) => {
                    let _ = writeln!(out, "# {text}");
                }
                Line::Event(e) => {
                    let _ = writeln!(
                        out,
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                        e.run, e.step, e.direction, e.start, e.end, e.label, e.before, e.after, e.accepted
                    );
                }
            }
        }
        out
    }
}
