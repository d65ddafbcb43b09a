use crate::config::{sha256_hex, ScenarioConfig};
use crate::error::{CliError, CliResult};
use crate::runner::run_scenario;
use crate::table::ResultTable;

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub kind: String,
    pub rows: usize,
    pub config_hash_ok: bool,
    pub data_hash_ok: bool,
    /// `Some` when the scenario was re-executed.
    pub rerun_matches: Option<bool>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.config_hash_ok && self.data_hash_ok && self.rerun_matches != Some(false)
    }
}

/// Re-verifies the embedded config hash and the data hash; with `rerun`
/// the embedded config is executed again and compared byte for byte.
pub fn audit_table(text: &str, rerun: bool) -> CliResult<AuditReport> {
    let loaded = ResultTable::parse(text)?;
    let prov = &loaded.table.provenance;
    let get = |k: &str| {
        prov.get(k).ok_or_else(|| CliError::Parse {
            location: "provenance".into(),
            message: format!("missing `{k}`"),
        })
    };
    let config = get("config")?;
    let config_hash_ok = sha256_hex(config.as_bytes()) == *get("config_hash")?;
    let data_hash_ok = loaded.recorded_data_hash.as_deref() == Some(loaded.table.data_hash().as_str());
    let rerun_matches = if rerun {
        let cfg: ScenarioConfig = serde_json::from_str(config).map_err(|e| CliError::Parse {
            location: "provenance.config".into(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        let fresh = run_scenario(&cfg).unwrap_or_else(|failed| failed);
        Some(fresh == loaded.table)
    } else {
        None
    };
    Ok(AuditReport {
        kind: get("kind")?.clone(),
        rows: loaded.table.rows.len(),
        config_hash_ok,
        data_hash_ok,
        rerun_matches,
    })
}
