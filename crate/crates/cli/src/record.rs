use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

/// One result in the published JSON schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub input: String,
    pub value: ComplexValue,
    pub jet: Vec<ComplexValue>,
    pub closed_form: Option<String>,
    pub oracle: Option<f64>,
    pub discrepancy: Option<f64>,
    pub trace: Vec<String>,
}

impl Record {
    pub fn new(input: impl Into<String>, value: Complex64) -> Self {
        Record {
            input: input.into(),
            value: value.into(),
            jet: Vec::new(),
            closed_form: None,
            oracle: None,
            discrepancy: None,
            trace: Vec::new(),
        }
    }

    pub fn text(&self) -> String {
        let mut out = format!("input:        {}\nvalue:        {}\n", self.input, fmt_value(self.value));
        if self.jet.len() > 1 {
            for (k, c) in self.jet.iter().enumerate() {
                out.push_str(&format!("[eps^{k}]:     {}\n", fmt_value(*c)));
            }
        }
        if let Some(c) = &self.closed_form {
            out.push_str(&format!("closed form:  {c}\n"));
        }
        if let Some(o) = self.oracle {
            out.push_str(&format!("oracle:       {o}\n"));
        }
        if let Some(d) = self.discrepancy {
            out.push_str(&format!("discrepancy:  {d:.3e}\n"));
        }
        for t in &self.trace {
            out.push_str(&format!("  - {t}\n"));
        }
        out
    }
}

pub fn fmt_value(v: ComplexValue) -> String {
    if v.im == 0.0 {
        format!("{}", v.re)
    } else if v.im < 0.0 {
        format!("{} - {}i", v.re, -v.im)
    } else {
        format!("{} + {}i", v.re, v.im)
    }
}
