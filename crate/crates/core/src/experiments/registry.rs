use serde::Serialize;

/// One runnable experiment with its default parameters.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentInfo {
    pub name: &'static str,
    pub figure: &'static str,
    pub description: &'static str,
    pub defaults: Vec<(&'static str, f64)>,
    /// Runs that take many minutes at default settings.
    pub long_running: bool,
    /// Parameter presets reachable as `<name>-<suffix>`.
    pub variants: Vec<Variant>,
    /// Keys whose defaults are choices made here rather than caption values.
    pub assumed: Vec<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Variant {
    pub name: &'static str,
    pub description: &'static str,
    pub overrides: Vec<(&'static str, f64)>,
}

impl ExperimentInfo {
    pub fn default_of(&self, key: &str) -> Option<f64> {
        self.defaults.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }
}

fn two_atom(panel: &'static str, delta_ratio: f64, omega_ratio: f64) -> ExperimentInfo {
    ExperimentInfo {
        name: panel,
        figure: match panel {
            "fig2a" => "Fig. 2(a)",
            "fig2b" => "Fig. 2(b)",
            "fig2c" => "Fig. 2(c)",
            _ => "Fig. 2(d)",
        },
        description: "two-atom URP populations from the four-state ground mixture",
        defaults: vec![
            ("omega1", 1.0),
            ("delta_ratio", delta_ratio),
            ("omega_ratio", omega_ratio),
            ("t_final", 300.0),
            ("records", 600.0),
            ("stark_cancel", 1.0),
        ],
        long_running: false,
        variants: Vec::new(),
        assumed: if panel == "fig2d" {
            vec!["t_final", "stark_cancel"]
        } else {
            vec!["delta_ratio", "omega_ratio", "t_final", "stark_cancel"]
        },
    }
}

/// The registry, in listing order.
pub fn list_experiments() -> Vec<ExperimentInfo> {
    let gate = vec![
        ("omega1", 1.0),
        ("omega2", 0.05),
        ("delta", 58.0),
        ("u_rr", 58.0),
        ("stark_cancel", 1.0),
        ("records", 400.0),
    ];
    let bell = vec![
        ("omega1", 1.0),
        ("omega2", 0.02),
        ("omega_mw", 0.01),
        ("delta", 100.0),
        ("u_rr", 100.0),
        ("gamma", 0.05),
        ("stark_cancel", 1.0),
        ("window", 100.0),
        ("rate", 1e-6),
        ("t_max", 10000.0),
        ("record_interval", 1.0),
    ];
    let qec = vec![
        ("omega1", 3.0),
        ("omega2", 0.05),
        ("delta", 800.0),
        ("u_rr", 800.0),
        ("g", 1.0),
        ("kappa_e", 0.02),
        ("gamma", 0.0),
        ("stark_cancel", 1.0),
    ];
    vec![
        two_atom("fig2a", 10.0, 10.0),
        two_atom("fig2b", 20.0, 10.0),
        two_atom("fig2c", 50.0, 10.0),
        two_atom("fig2d", 50.0, 20.0),
        ExperimentInfo {
            name: "fig4",
            figure: "Fig. 4",
            description: "three-atom controlled gate, unitary overlap with the target state",
            defaults: gate.clone(),
            long_running: false,
            variants: Vec::new(),
            assumed: vec!["stark_cancel"],
        },
        ExperimentInfo {
            name: "gate-dissipative",
            figure: "-",
            description: "three-atom gate with Rydberg decay, fidelity at T = pi/omega2",
            defaults: [gate, vec![("gamma", 0.001)]].concat(),
            long_running: false,
            variants: Vec::new(),
            assumed: vec!["stark_cancel"],
        },
        ExperimentInfo {
            name: "fig6",
            figure: "Fig. 6",
            description: "Bell-state stabilization from the equal four-state mixture",
            defaults: bell,
            long_running: false,
            variants: vec![Variant {
                name: "fig6-exp",
                description: "experimental parameter set with gamma = 0.03",
                overrides: vec![("gamma", 0.03)],
            }],
            assumed: vec!["stark_cancel", "window", "rate", "t_max", "record_interval"],
        },
        ExperimentInfo {
            name: "fig8",
            figure: "Fig. 8",
            description: "two-qutrit |T1> stabilization with calibrated delta",
            defaults: vec![
                ("omega1", 1.0),
                ("omega2", 0.02),
                ("omega_mw1", 0.01),
                ("omega_mw2", 0.01),
                ("delta", 100.0),
                ("u", 100.0),
                ("gamma", 0.05),
                ("delta_small", 0.02),
                ("calibrate", 1.0),
                ("calibration_points", 25.0),
                ("stark_cancel", 1.0),
                ("t_final", 8000.0),
                ("records", 800.0),
            ],
            long_running: true,
            variants: vec![Variant {
                name: "fig8-exp",
                description: "experimental parameter set with gamma = 0.03",
                overrides: vec![("gamma", 0.03)],
            }],
            assumed: vec!["u", "delta_small", "calibrate", "calibration_points", "stark_cancel"],
        },
        ExperimentInfo {
            name: "fig10",
            figure: "Fig. 10",
            description: "autonomous correction of a single bit flip, full vs effective",
            defaults: [qec.clone(), vec![("t_final", 1000.0), ("records", 500.0)]].concat(),
            long_running: true,
            variants: vec![Variant {
                name: "fig10-exp",
                description: "experimental parameter set with Rydberg decay gamma = 0.001",
                overrides: vec![("gamma", 0.001)],
            }],
            assumed: vec!["stark_cancel"],
        },
        ExperimentInfo {
            name: "fig11",
            figure: "Fig. 11",
            description: "codeword fidelity under continuous bit-flip noise, g/Gamma sweep",
            defaults: [
                qec,
                vec![
                    ("include_500", 1.0),
                    ("include_1000", 1.0),
                    ("include_2000", 1.0),
                    ("baseline", 1.0),
                    ("records", 200.0),
                ],
            ]
            .concat(),
            long_running: true,
            variants: Vec::new(),
            assumed: vec!["stark_cancel"],
        },
    ]
}

/// Resolves a registry name or variant name to the base entry and the
/// variant's overrides.
pub fn lookup(name: &str) -> Option<(ExperimentInfo, Option<Variant>)> {
    for info in list_experiments() {
        if info.name == name {
            return Some((info, None));
        }
        if let Some(v) = info.variants.iter().find(|v| v.name == name).cloned() {
            return Some((info, Some(v)));
        }
    }
    None
}
