//! Machine-readable verification reports: one assertion per check, an
//! overall status, and deterministic JSON output (only the timing field
//! varies between runs).

use serde::Serialize;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub description: String,
    pub expected: String,
    pub got: String,
    pub status: Status,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub case: String,
    pub assertions: Vec<Assertion>,
    pub status: Status,
    /// backends that produced numbers: "recomputed" vs fixture provenances
    pub backends: Vec<String>,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn new(case: &str) -> Self {
        Report {
            case: case.to_string(),
            assertions: Vec::new(),
            status: Status::Pass,
            backends: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn check(&mut self, description: &str, expected: impl ToString, got: impl ToString) -> bool {
        let expected = expected.to_string();
        let got = got.to_string();
        let ok = expected == got;
        self.assertions.push(Assertion {
            description: description.to_string(),
            expected,
            got,
            status: if ok { Status::Pass } else { Status::Fail },
        });
        if !ok {
            self.status = Status::Fail;
        }
        ok
    }

    pub fn check_bool(&mut self, description: &str, ok: bool) -> bool {
        self.check(description, "true", if ok { "true" } else { "false" })
    }

    pub fn note_backend(&mut self, b: &str) {
        if !self.backends.iter().any(|x| x == b) {
            self.backends.push(b.to_string());
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn print_human(&self) {
        println!("case {}: {}", self.case, if self.passed() { "PASS" } else { "FAIL" });
        for a in &self.assertions {
            let mark = if a.status == Status::Pass { "ok " } else { "FAIL" };
            println!("  [{mark}] {}", a.description);
            if a.status == Status::Fail {
                println!("        expected: {}", a.expected);
                println!("        got:      {}", a.got);
            }
        }
        if !self.backends.is_empty() {
            println!("  backends: {}", self.backends.join(", "));
        }
    }
}
