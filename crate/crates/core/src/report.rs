//! Check results in two renderings: stable `key=value` lines for machines
//! and an aligned table for people. Both are sorted by key.

use std::fmt::Display;
use std::time::{Duration, Instant};

use crate::geometry::Verdict;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    /// Whether this entry counts as a passing check.
    pub ok: bool,
    pub witness: Option<String>,
    pub elapsed: Option<Duration>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<Entry>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn push(&mut self, key: impl Into<String>, value: String, ok: bool, witness: Option<String>) -> &mut Entry {
        let key = key.into();
        self.entries.retain(|e| e.key != key);
        self.entries.push(Entry {
            key,
            value,
            ok,
            witness,
            elapsed: None,
        });
        self.entries.last_mut().expect("just pushed")
    }

    /// An informational value that never fails.
    pub fn value(&mut self, key: impl Into<String>, value: impl Display) -> &mut Entry {
        self.push(key, value.to_string(), true, None)
    }

    /// A boolean check that passes when true.
    pub fn flag(&mut self, key: impl Into<String>, holds: bool) -> &mut Entry {
        self.push(key, holds.to_string(), holds, None)
    }

    /// A decided property with its witness on failure.
    pub fn verdict<W>(&mut self, key: impl Into<String>, v: &Verdict<W>, render: impl Fn(&W) -> String) -> &mut Entry {
        let witness = v.witness().map(render);
        self.push(key, v.holds().to_string(), v.holds(), witness)
    }

    /// A value compared against what it should be.
    pub fn expect<T: PartialEq + Display>(&mut self, key: impl Into<String>, actual: T, expected: T) -> &mut Entry {
        let ok = actual == expected;
        let witness = (!ok).then(|| format!("expected {expected}"));
        self.push(key, actual.to_string(), ok, witness)
    }

    /// Runs `f`, recording its result under `key` together with the time it took.
    pub fn timed<T>(&mut self, key: &str, f: impl FnOnce() -> T, record: impl FnOnce(&mut Report, &T)) -> T {
        let start = Instant::now();
        let out = f();
        let elapsed = start.elapsed();
        record(self, &out);
        if let Some(e) = self.entries.iter_mut().find(|e| e.key == key) {
            e.elapsed = Some(elapsed);
        }
        out
    }

    pub fn fail(&mut self, key: impl Into<String>, reason: impl Display) -> &mut Entry {
        self.push(key, "error".to_string(), false, Some(reason.to_string()))
    }

    /// Copies `other` in with every key prefixed by `prefix.`.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut e in other.entries {
            e.key = format!("{prefix}.{}", e.key);
            self.entries.retain(|x| x.key != e.key);
            self.entries.push(e);
        }
    }

    pub fn all_ok(&self) -> bool {
        self.entries.iter().all(|e| e.ok)
    }

    fn sorted(&self) -> Vec<&Entry> {
        let mut v: Vec<&Entry> = self.entries.iter().collect();
        v.sort_by(|a, b| a.key.cmp(&b.key));
        v
    }

    /// `key=value` lines, plus `key.witness=...` where there is one.
    /// Timings are left out so that the output is deterministic.
    pub fn machine(&self) -> String {
        let mut out = String::new();
        for e in self.sorted() {
            out.push_str(&format!("{}={}\n", e.key, e.value));
            if let Some(w) = &e.witness {
                out.push_str(&format!("{}.witness={}\n", e.key, w));
            }
        }
        out
    }

    pub fn human(&self) -> String {
        let rows = self.sorted();
        let kw = rows.iter().map(|e| e.key.chars().count()).max().unwrap_or(0).max(5);
        let vw = rows.iter().map(|e| e.value.chars().count()).max().unwrap_or(0).max(5);
        let mut out = format!(
            "{:<kw$}  {:<vw$}  {:<4}  {:>9}  witness\n",
            "check", "value", "ok", "time"
        );
        for e in rows {
            let time = e
                .elapsed
                .map(|d| format!("{:.1}ms", d.as_secs_f64() * 1000.0))
                .unwrap_or_default();
            out.push_str(&format!(
                "{:<kw$}  {:<vw$}  {:<4}  {:>9}  {}\n",
                e.key,
                e.value,
                if e.ok { "yes" } else { "NO" },
                time,
                e.witness.as_deref().unwrap_or("")
            ));
        }
        out
    }
}
