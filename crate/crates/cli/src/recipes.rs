//! Built-in figure recipes: the reference config files shipped under
//! `recipes/`, embedded so they can be listed and run by name.

pub struct Recipe {
    pub name: &'static str,
    pub description: &'static str,
    pub toml: &'static str,
}

pub const ALL: &[Recipe] = &[
    Recipe {
        name: "fig01_sweep",
        description: "minimum balance vs drive-to-decay ratio, with the violation threshold",
        toml: include_str!("../recipes/fig01_sweep.toml"),
    },
    Recipe {
        name: "fig02_fit_decay",
        description: "undriven ladder decay and the effective-rate fit",
        toml: include_str!("../recipes/fig02_fit_decay.toml"),
    },
    Recipe {
        name: "fig03_ledger",
        description: "entropy ledger from the excited state at laboratory rates",
        toml: include_str!("../recipes/fig03_ledger.toml"),
    },
    Recipe {
        name: "fig04_ledger",
        description: "entropy ledger from the excited state, underdamped regime",
        toml: include_str!("../recipes/fig04_ledger.toml"),
    },
    Recipe {
        name: "fig05_scan",
        description: "minimum-balance map over initial states, intermediate drive",
        toml: include_str!("../recipes/fig05_scan.toml"),
    },
    Recipe {
        name: "fig06_ledger",
        description: "entropy ledger from a coherent state violating the bound at all times",
        toml: include_str!("../recipes/fig06_ledger.toml"),
    },
    Recipe {
        name: "fig07_scan",
        description: "minimum-balance map over initial states, decay-dominated regime",
        toml: include_str!("../recipes/fig07_scan.toml"),
    },
    Recipe {
        name: "fig08_scan",
        description: "minimum-balance map over initial states, underdamped regime",
        toml: include_str!("../recipes/fig08_scan.toml"),
    },
    Recipe {
        name: "fig09_noise",
        description: "shot-noise decorated trajectory and entropy error curves",
        toml: include_str!("../recipes/fig09_noise.toml"),
    },
    Recipe {
        name: "fig10_sweep_beta",
        description: "ratio sweep carrying the inverse-temperature series",
        toml: include_str!("../recipes/fig10_sweep_beta.toml"),
    },
    Recipe {
        name: "fig11_reduction",
        description: "leakage correction of the reduced description across ratios",
        toml: include_str!("../recipes/fig11_reduction.toml"),
    },
    Recipe {
        name: "fig12_ledger_strong",
        description: "entropy ledger in the drive-dominated regime with formula samples",
        toml: include_str!("../recipes/fig12_ledger_strong.toml"),
    },
    Recipe {
        name: "fig13_ladder",
        description: "ladder relaxation toward stationarity with reduction comparison",
        toml: include_str!("../recipes/fig13_ladder.toml"),
    },
];

pub fn find(name: &str) -> Option<&'static Recipe> {
    ALL.iter().find(|r| r.name == name)
}
