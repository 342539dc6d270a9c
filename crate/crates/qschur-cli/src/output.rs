//! Rendering of command results as JSON, CSV or plain text.

use clap::ValueEnum;
use qschur::suites::SuiteReport;
use qschur::tensor::TensorElement;
use qschur::{AlgebraElement, ThetaMatrix};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

pub enum Output {
    Element(AlgebraElement),
    Matrices { set: String, matrices: Vec<ThetaMatrix> },
    Words { set: String, words: Vec<Vec<usize>> },
    Tensor(TensorElement),
    Report(SuiteReport),
}

#[derive(Serialize)]
struct WordList<'a> {
    set: &'a str,
    count: usize,
    words: &'a [Vec<usize>],
}

#[derive(Serialize)]
struct MatrixList<'a> {
    set: &'a str,
    count: usize,
    matrices: &'a [ThetaMatrix],
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("serializable");
    s.push('\n');
    s
}

pub fn render(out: &Output, format: Format) -> String {
    match (out, format) {
        (Output::Element(x), Format::Json) => json(x),
        (Output::Element(x), Format::Csv) => {
            let mut s = String::from("matrix,coefficient\n");
            for (a, c) in x.terms() {
                s += &format!("{},{}\n", csv_field(&a.to_string()), csv_field(&c.to_string()));
            }
            s
        }
        (Output::Element(x), Format::Pretty) => {
            let mut s = format!("{}\n", x.context());
            if x.is_zero() {
                s += "0\n";
            }
            for (a, c) in x.terms() {
                s += &format!("  {a}  {c}\n");
            }
            s
        }
        (Output::Matrices { set, matrices }, Format::Json) => {
            json(&MatrixList { set, count: matrices.len(), matrices })
        }
        (Output::Matrices { matrices, .. }, Format::Csv) => {
            let mut s = String::from("matrix\n");
            for a in matrices {
                s += &format!("{}\n", csv_field(&a.to_string()));
            }
            s
        }
        (Output::Matrices { set, matrices }, Format::Pretty) => {
            let mut s = format!("{set}: {} matrices\n", matrices.len());
            for a in matrices {
                s += &format!("  {a}\n");
            }
            s
        }
        (Output::Words { set, words }, Format::Json) => json(&WordList { set, count: words.len(), words }),
        (Output::Words { words, .. }, Format::Csv) => {
            let mut s = String::from("word\n");
            for w in words {
                let w: Vec<String> = w.iter().map(|r| r.to_string()).collect();
                s += &format!("{}\n", csv_field(&w.join(",")));
            }
            s
        }
        (Output::Words { set, words }, Format::Pretty) => {
            let mut s = format!("{set}: {} words\n", words.len());
            for w in words {
                let w: Vec<String> = w.iter().map(|r| r.to_string()).collect();
                s += &format!("  {}\n", w.join(","));
            }
            s
        }
        (Output::Tensor(x), Format::Json) => json(x),
        (Output::Tensor(x), Format::Csv) => {
            let mut s = String::from("word,coefficient\n");
            for (w, c) in x.terms() {
                let w: Vec<String> = w.iter().map(|r| r.to_string()).collect();
                s += &format!("{},{}\n", csv_field(&w.join(",")), csv_field(&c.to_string()));
            }
            s
        }
        (Output::Tensor(x), Format::Pretty) => format!("{x}\n"),
        (Output::Report(r), Format::Json) => json(r),
        (Output::Report(r), Format::Csv) => {
            let mut s = String::from("suite,check,checked,pass\n");
            for c in &r.checks {
                s += &format!("{},{},{},{}\n", r.suite, csv_field(&c.name), c.checked, c.pass);
            }
            s
        }
        (Output::Report(r), Format::Pretty) => {
            let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let mut s = format!(
                "{} ({}): {}\n",
                r.suite,
                params.join(", "),
                if r.pass { "PASS" } else { "FAIL" }
            );
            for c in &r.checks {
                s += &format!("  [{}] {} ({} checked)\n", if c.pass { "pass" } else { "FAIL" }, c.name, c.checked);
                for f in &c.failures {
                    s += &format!("      {f}\n");
                }
            }
            for note in &r.notes {
                s += &format!("  note: {note}\n");
            }
            s
        }
    }
}
