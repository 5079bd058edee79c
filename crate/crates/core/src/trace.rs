//! Evaluation events and their line-oriented text form.
//!
//! Each event renders as one line of `name=value` fields. Values that may
//! contain spaces are written as quoted, escaped strings so the stream can
//! be split on whitespace outside quotes.

use std::fmt;
use std::io::{self, Write};

use crate::ast::{Constant, Definition, Expr, QuantKind};
use crate::eval::Counters;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    EvalEnter(Expr),
    BackchainMatch {
        index: usize,
        kind: QuantKind,
        call: String,
    },
    MemoAdd(Definition),
    MemoHit {
        call: String,
        value: Constant,
    },
    BuiltinApply {
        name: &'static str,
        args: Vec<Constant>,
        result: Constant,
    },
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::EvalEnter(e) => write!(f, "event=eval_enter expr={:?}", e.to_string()),
            TraceEvent::BackchainMatch { index, kind, call } => {
                write!(f, "event=backchain_match index={index} kind={kind} call={call:?}")
            }
            TraceEvent::MemoAdd(def) => write!(f, "event=memo_add def={:?}", def.to_string()),
            TraceEvent::MemoHit { call, value } => {
                write!(f, "event=memo_hit call={call:?} value={value}")
            }
            TraceEvent::BuiltinApply { name, args, result } => {
                let args: Vec<String> = args.iter().map(Constant::to_string).collect();
                write!(f, "event=builtin_apply name={name} args={:?} result={result}", args.join(","))
            }
        }
    }
}

/// Receives events synchronously, in evaluation order.
pub trait TraceSink {
    fn event(&mut self, event: &TraceEvent);
}

impl<F: FnMut(&TraceEvent)> TraceSink for F {
    fn event(&mut self, event: &TraceEvent) {
        self(event)
    }
}

/// Collects events in memory.
#[derive(Debug, Default)]
pub struct VecSink(pub Vec<TraceEvent>);

impl TraceSink for VecSink {
    fn event(&mut self, event: &TraceEvent) {
        self.0.push(event.clone());
    }
}

/// Writes one line per event. The first write error is kept and later
/// events are dropped.
pub struct LineSink<W: Write> {
    out: W,
    error: Option<io::Error>,
}

impl<W: Write> LineSink<W> {
    pub fn new(out: W) -> Self {
        LineSink { out, error: None }
    }

    pub fn finish(self) -> io::Result<W> {
        match self.error {
            Some(e) => Err(e),
            None => Ok(self.out),
        }
    }
}

impl<W: Write> TraceSink for LineSink<W> {
    fn event(&mut self, event: &TraceEvent) {
        if self.error.is_none() {
            if let Err(e) = writeln!(self.out, "{event}") {
                self.error = Some(e);
            }
        }
    }
}

/// The final summary record of a trace.
pub fn summary_line(counters: &Counters) -> String {
    let mut line = String::from("summary");
    for (name, value) in counters.fields() {
        line.push_str(&format!(" {name}={value}"));
    }
    line
}
