use sha2::{Digest, Sha256};

/// Short content digest of the canonical instance text.
pub fn instance_digest(serialized: &str) -> String {
    let hash = Sha256::digest(serialized.as_bytes());
    hash.iter().take(6).map(|b| format!("{b:02x}")).collect()
}

/// What a solve run reports: human-readable lines plus one machine-readable
/// key=value summary line. The optimum is always the size of a packing that
/// re-verified successfully.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub algorithm: &'static str,
    pub instance_name: String,
    pub digest: String,
    pub optimum: usize,
    pub k: usize,
    pub decision_yes: bool,
    pub wall_ms: u128,
    pub lambda: usize,
    pub delta: usize,
    pub max_path_len: usize,
    pub core_edges: Option<usize>,
    pub width: Option<usize>,
    pub solution_path: Option<String>,
}

fn opt_str(v: Option<usize>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

impl std::fmt::Display for RunReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "algorithm: {}", self.algorithm)?;
        writeln!(f, "instance: {} digest={}", self.instance_name, self.digest)?;
        writeln!(f, "optimum: {}", self.optimum)?;
        writeln!(
            f,
            "decision: {} (k = {})",
            if self.decision_yes { "YES" } else { "NO" },
            self.k
        )?;
        writeln!(f, "wall_ms: {}", self.wall_ms)?;
        writeln!(
            f,
            "parameters: lambda={} delta={} r={} core_edges={} width={}",
            self.lambda,
            self.delta,
            self.max_path_len,
            opt_str(self.core_edges),
            opt_str(self.width),
        )?;
        if let Some(path) = &self.solution_path {
            writeln!(f, "solution: {path}")?;
        }
        writeln!(
            f,
            "summary: algo={} digest={} size={} k={} decision={} wall_ms={} lambda={} delta={} r={} core_edges={} width={}",
            self.algorithm,
            self.digest,
            self.optimum,
            self.k,
            if self.decision_yes { "YES" } else { "NO" },
            self.wall_ms,
            self.lambda,
            self.delta,
            self.max_path_len,
            opt_str(self.core_edges),
            opt_str(self.width),
        )
    }
}
