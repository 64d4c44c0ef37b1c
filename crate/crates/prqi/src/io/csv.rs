//! Minimal RFC 4180 CSV output: CRLF line endings, quoting only where
//! required, floats at 17 significant digits so values round-trip exactly.

/// 17-significant-digit scientific notation (full f64 precision).
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\r') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// One CSV record with CRLF terminator.
pub fn format_row(fields: &[String]) -> String {
    let mut out = fields.iter().map(|f| escape(f)).collect::<Vec<_>>().join(",");
    out.push_str("\r\n");
    out
}

/// Convenience builder collecting rows into a single byte-deterministic
/// document.
#[derive(Debug, Default, Clone)]
pub struct CsvDocument {
    text: String,
}

impl CsvDocument {
    pub fn new() -> Self {
        CsvDocument { text: String::new() }
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        let owned: Vec<String> = fields.iter().map(|f| f.as_ref().to_string()).collect();
        self.text.push_str(&format_row(&owned));
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn write(&self, path: &std::path::Path) -> std::io::Result<()> {
        std::fs::write(path, &self.text)
    }
}
