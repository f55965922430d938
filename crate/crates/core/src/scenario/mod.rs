//! Scenario files, the batch runner and the invariant audit behind the
//! command-line tool.

mod checks;
mod config;
mod run;

pub use checks::{crosscheck, run_audit, Check, CheckReport};
pub use config::{
    validate_config, GridConfig, OutputOptions, PacketConfig, PacketKind, ScenarioConfig, ScenarioKind, SveaConfig,
};
pub use run::{build_packet, on_shell_state, run_scenario, Manifest, ManifestEntry, RunSummary, MANIFEST_NAME};
