//! Built-in systems: three test problems with known behaviour and three
//! epidemiological compartment models.
//!
//! Every model carries two right-hand-side backends that evaluate identically:
//! a native closure, and the same formulas as expression strings over
//! `t`, `y1..yN` and the parameter names. Population-style denominators are
//! recomputed from the current state on every evaluation.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::system::{init_count, ExprRhs, FnRhs, FractionalSystem, Rhs};

/// Parameter values keyed by name.
pub type Params = BTreeMap<String, f64>;

type NativeBuilder = fn(&ParamView) -> Arc<dyn Rhs>;

pub struct ModelEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub notes: &'static str,
    pub states: &'static [&'static str],
    pub default_orders: &'static [f64],
    /// Available initial data per state: `y(0), y'(0), ...`.
    pub init: &'static [&'static [f64]],
    pub params: &'static [(&'static str, f64)],
    /// Right-hand sides as expressions; `{N}` expands to the sum of all states
    /// and `{lam}` to the smoking model's force of infection.
    rhs_templates: &'static [&'static str],
    native: NativeBuilder,
}

impl ModelEntry {
    pub fn n(&self) -> usize {
        self.states.len()
    }

    pub fn defaults(&self) -> Params {
        self.params
            .iter()
            .map(|&(k, v)| (k.to_string(), v))
            .collect()
    }

    /// Right-hand sides as expression strings.
    pub fn rhs_expressions(&self) -> Vec<String> {
        let total = (1..=self.n())
            .map(|i| format!("y{i}"))
            .collect::<Vec<_>>()
            .join(" + ");
        let total = format!("({total})");
        let lam = format!("(beta * (y3 + eta * y4) / {total})");
        self.rhs_templates
            .iter()
            .map(|s| s.replace("{N}", &total).replace("{lam}", &lam))
            .collect()
    }

    fn merged_params(&self, overrides: &Params) -> Result<Params> {
        let mut params = self.defaults();
        for (k, &v) in overrides {
            match params.get_mut(k) {
                Some(slot) => *slot = v,
                None => {
                    return Err(Error::Lookup(format!(
                        "model `{}` has no parameter `{k}`",
                        self.name
                    )))
                }
            }
        }
        Ok(params)
    }

    fn initial_data(&self, orders: &[f64]) -> Result<Vec<Vec<f64>>> {
        orders
            .iter()
            .zip(self.init)
            .enumerate()
            .map(|(i, (&a, data))| {
                let need = init_count(a);
                if need > data.len() {
                    Err(Error::Input(format!(
                        "state `{}` of `{}` has {} initial value(s); order {a} needs {need}",
                        self.states[i],
                        self.name,
                        data.len()
                    )))
                } else {
                    Ok(data[..need].to_vec())
                }
            })
            .collect()
    }

    fn resolve_orders(&self, orders: Option<&[f64]>) -> Result<Vec<f64>> {
        match orders {
            None => Ok(self.default_orders.to_vec()),
            Some(o) if o.len() == self.n() => Ok(o.to_vec()),
            Some(o) => Err(Error::Input(format!(
                "model `{}` has {} states but {} orders were given",
                self.name,
                self.n(),
                o.len()
            ))),
        }
    }

    fn assemble(&self, orders: Option<&[f64]>, rhs: Arc<dyn Rhs>) -> Result<FractionalSystem> {
        let orders = self.resolve_orders(orders)?;
        let init = self.initial_data(&orders)?;
        FractionalSystem::new(
            self.name,
            self.states.iter().map(|s| s.to_string()).collect(),
            orders,
            init,
            1.0,
            rhs,
        )
    }

    /// System with the native right-hand side.
    pub fn build(&self, overrides: &Params, orders: Option<&[f64]>) -> Result<FractionalSystem> {
        let params = self.merged_params(overrides)?;
        let rhs = (self.native)(&ParamView(&params));
        self.assemble(orders, rhs)
    }

    /// System with the expression-string right-hand side.
    pub fn build_from_expressions(
        &self,
        overrides: &Params,
        orders: Option<&[f64]>,
    ) -> Result<FractionalSystem> {
        let params: Vec<(String, f64)> = self.merged_params(overrides)?.into_iter().collect();
        let exprs = self.rhs_expressions();
        let refs: Vec<&str> = exprs.iter().map(String::as_str).collect();
        let rhs = Arc::new(ExprRhs::parse(&refs, &params)?);
        self.assemble(orders, rhs)
    }
}

/// Read-only parameter lookup; all keys are validated before builders run.
pub struct ParamView<'a>(&'a Params);

impl ParamView<'_> {
    fn get(&self, key: &str) -> f64 {
        self.0[key]
    }
}

/// Guard against a vanishing population denominator.
fn denominator(t: f64, value: f64) -> Result<f64> {
    if value.abs() < 1e-12 {
        Err(Error::Model {
            t,
            msg: format!("population denominator {value:e} is (nearly) zero"),
        })
    } else {
        Ok(value)
    }
}

fn native<F>(f: F) -> Arc<dyn Rhs>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<()> + Send + Sync + 'static,
{
    Arc::new(FnRhs(f))
}

fn example_61(_: &ParamView) -> Arc<dyn Rhs> {
    native(|_t, y, out| {
        out[0] = y[0] + y[1].powi(2);
        out[1] = y[0] + 5.0 * y[1];
        Ok(())
    })
}

fn example_62(_: &ParamView) -> Arc<dyn Rhs> {
    native(|_t, y, out| {
        out[0] = y[0] + y[1];
        out[1] = -y[0] + y[1];
        Ok(())
    })
}

fn example_63(_: &ParamView) -> Arc<dyn Rhs> {
    native(|t, y, out| {
        out[0] = 2.0 * y[1].powi(2);
        out[1] = t * y[0];
        out[2] = y[1] * y[2];
        Ok(())
    })
}

fn smoking(p: &ParamView) -> Arc<dyn Rhs> {
    let (pi, pp, eps, mu) = (p.get("pi"), p.get("p"), p.get("epsilon"), p.get("mu"));
    let (f, beta, eta, sigma) = (p.get("f"), p.get("beta"), p.get("eta"), p.get("sigma"));
    let (rho1, rho2, gamma, delta) = (p.get("rho1"), p.get("rho2"), p.get("gamma"), p.get("delta"));
    native(move |t, y, out| {
        let (sp, sa, ls, cs, q) = (y[0], y[1], y[2], y[3], y[4]);
        let n = denominator(t, sp + sa + ls + cs + q)?;
        let lam = beta * (ls + eta * cs) / n;
        out[0] = (1.0 - pp) * pi - (eps + lam + mu) * sp;
        out[1] = pp * pi + eps * sp - (1.0 - f) * lam * sa - mu * sa;
        out[2] = lam * sp + (1.0 - f) * lam * sa + sigma * cs - (mu + rho1 + gamma) * ls;
        out[3] = gamma * ls - (sigma + rho2 + delta + mu) * cs;
        out[4] = rho1 * ls + rho2 * cs - mu * q;
        Ok(())
    })
}

fn lung_cancer(p: &ParamView) -> Arc<dyn Rhs> {
    let (big_lambda, q, beta, mu) = (p.get("Lambda"), p.get("q"), p.get("beta"), p.get("mu"));
    let (p_n, p_s, beta_e) = (p.get("p_n"), p.get("p_s"), p.get("beta_e"));
    let (sigma1, gamma1, delta1) = (p.get("sigma1"), p.get("gamma1"), p.get("delta1"));
    let (gamma2, delta2, p1, p2) = (p.get("gamma2"), p.get("delta2"), p.get("p1"), p.get("p2"));
    let (delta_q, d) = (p.get("delta_q"), p.get("d"));
    native(move |t, y, out| {
        let (nn, i1, i2, qq, s, l, e) = (y[0], y[1], y[2], y[3], y[4], y[5], y[6]);
        let total = denominator(t, nn + i1 + i2 + qq + s + l + e)?;
        out[0] = (1.0 - q) * big_lambda - beta * nn * (i1 + i2) / total - mu * nn;
        out[1] = ((1.0 - p_n) * beta * nn + (1.0 - p_s) * beta * s) * (i1 + i2) / total
            - (sigma1 + gamma1 + delta1 + mu) * i1;
        out[2] = gamma1 * i1 - (gamma2 + delta2 + mu) * i2;
        out[3] = p2 * gamma2 * i2 + p1 * sigma1 * i1 - (delta_q + mu) * qq;
        out[4] = (1.0 - p1) * sigma1 * i1 + (1.0 - p2) * gamma2 * i2
            - beta * s * (i1 + i2) / total
            - mu * s;
        out[5] = (p_n * beta * nn + p_s * beta * s + beta_e * e) * (i1 + i2) / total
            + delta1 * i1
            + delta2 * i2
            + delta_q * qq
            - (mu + d) * l;
        out[6] = q * big_lambda - beta_e * e * (i1 + i2) / total - mu * e;
        Ok(())
    })
}

fn hepatitis_b(p: &ParamView) -> Arc<dyn Rhs> {
    let (b, mu, c, pp, eta, phi) = (
        p.get("b"),
        p.get("mu"),
        p.get("c"),
        p.get("p"),
        p.get("eta"),
        p.get("phi"),
    );
    let (sigma_s, sigma_a, sigma_c) = (p.get("sigma_s"), p.get("sigma_a"), p.get("sigma_c"));
    let (varphi_u, varphi_f) = (p.get("varphi_u"), p.get("varphi_f"));
    let (gamma_c, delta_a, delta_c) = (p.get("gamma_c"), p.get("delta_a"), p.get("delta_c"));
    let (eps_rho, w, eps_c, theta) = (p.get("eps_rho"), p.get("w"), p.get("eps_c"), p.get("theta"));
    let (tau_b, tau_c, tau_u, tau_f) = (
        p.get("tau_b"),
        p.get("tau_c"),
        p.get("tau_u"),
        p.get("tau_f"),
    );
    native(move |t, y, out| {
        let (su, sf, v, au, af, cu, cf, r) = (y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7]);
        let n = denominator(t, su + sf + v + au + af + cu + cf + r)?;
        let infection = pp * c * (af + eta * cf) * (1.0 - eps_c * tau_c) / n * sf;
        let births_infected = b * theta * (af + phi * cf) * (1.0 - eps_rho * tau_b);
        out[0] = b * n * (1.0 - eps_rho * tau_b)
            - births_infected
            - (sigma_s + eps_rho * tau_u + mu) * su;
        out[1] = sigma_s * su + w * v - infection - (eps_rho * tau_f + mu) * sf;
        out[2] =
            b * n * eps_rho * tau_b + eps_rho * tau_u * su + eps_rho * tau_f * sf - (w + mu) * v;
        out[3] = births_infected - (sigma_a + mu + delta_a) * au;
        out[4] = infection - (sigma_a + mu + delta_a) * af;
        out[5] = sigma_a * varphi_u * au - (sigma_c + mu) * cu;
        out[6] = sigma_a * varphi_f * af + sigma_c * cu - (gamma_c + mu + delta_c) * cf;
        out[7] = sigma_a * (1.0 - varphi_u) * au + sigma_a * (1.0 - varphi_f) * af + gamma_c * cf
            - mu * r;
        Ok(())
    })
}

static REGISTRY: &[ModelEntry] = &[
    ModelEntry {
        name: "example-6.1",
        description: "Nonlinear pair D^a y1 = y1 + y2^2, D^b y2 = y1 + 5 y2 with derivative initial data",
        notes: "Mixed-order test problem; orders above one use derivative initial data",
        states: &["y1", "y2"],
        default_orders: &[1.3, 2.4],
        init: &[&[0.0, 1.0], &[0.0, 1.0, 1.0]],
        params: &[],
        rhs_templates: &["y1 + y2^2", "y1 + 5 * y2"],
        native: example_61,
    },
    ModelEntry {
        name: "example-6.2",
        description: "Linear pair D^a x = x + y, D^b y = -x + y; exact (e^t sin t, e^t cos t) at unit order",
        notes: "Linear test problem with a closed-form unit-order solution",
        states: &["x", "y"],
        default_orders: &[1.0, 1.0],
        init: &[&[0.0], &[1.0]],
        params: &[],
        rhs_templates: &["y1 + y2", "-y1 + y2"],
        native: example_62,
    },
    ModelEntry {
        name: "example-6.3",
        description: "Nonlinear triple D^a x = 2y^2, D^b y = t x, D^c z = y z",
        notes: "Nonlinear test problem without a closed form",
        states: &["x", "y", "z"],
        default_orders: &[1.0, 1.0, 1.0],
        init: &[&[0.0], &[1.0], &[1.0]],
        params: &[],
        rhs_templates: &["2 * y2^2", "t * y1", "y2 * y3"],
        native: example_63,
    },
    ModelEntry {
        name: "smoking",
        description: "Smoking dynamics under pro- and anti-smoking campaigns (5 compartments)",
        notes: "Force of infection beta (Ls + eta Cs) / N with N the 5-state total",
        states: &["Sp", "Sa", "Ls", "Cs", "Q"],
        default_orders: &[1.0; 5],
        init: &[&[8000.0], &[1970.0], &[20.0], &[10.0], &[0.0]],
        params: &[
            ("beta", 2.0),
            ("delta", 0.01),
            ("epsilon", 0.001),
            ("eta", 0.0002),
            ("f", 1.0),
            ("gamma", 0.6),
            ("mu", 0.031),
            ("p", 0.8),
            ("pi", 14.0),
            ("rho1", 0.5),
            ("rho2", 0.25),
            ("sigma", 0.0307),
        ],
        rhs_templates: &[
            "(1 - p) * pi - (epsilon + {lam} + mu) * y1",
            "p * pi + epsilon * y1 - (1 - f) * {lam} * y2 - mu * y2",
            "{lam} * y1 + (1 - f) * {lam} * y2 + sigma * y4 - (mu + rho1 + gamma) * y3",
            "gamma * y3 - (sigma + rho2 + delta + mu) * y4",
            "rho1 * y3 + rho2 * y4 - mu * y5",
        ],
        native: smoking,
    },
    ModelEntry {
        name: "lung-cancer",
        description: "Lung cancer with second-hand smoke and education (7 compartments)",
        notes: "Mixing terms divide by the 7-state total",
        states: &["N", "I1", "I2", "Q", "S", "L", "E"],
        default_orders: &[1.0; 7],
        init: &[&[500.0], &[200.0], &[200.0], &[200.0], &[200.0], &[200.0], &[200.0]],
        params: &[
            ("Lambda", 14.0),
            ("beta", 2.0),
            ("beta_e", 1e-4),
            ("d", 0.016),
            ("delta1", 0.01),
            ("delta2", 0.03),
            ("delta_q", 0.005),
            ("gamma1", 0.6),
            ("gamma2", 0.25),
            ("mu", 0.014),
            ("p1", 0.025),
            ("p2", 0.025),
            ("p_n", 1e-4),
            ("p_s", 1e-3),
            ("q", 0.25),
            ("sigma1", 0.5),
        ],
        rhs_templates: &[
            "(1 - q) * Lambda - beta * y1 * (y2 + y3) / {N} - mu * y1",
            "((1 - p_n) * beta * y1 + (1 - p_s) * beta * y5) * (y2 + y3) / {N} - (sigma1 + gamma1 + delta1 + mu) * y2",
            "gamma1 * y2 - (gamma2 + delta2 + mu) * y3",
            "p2 * gamma2 * y3 + p1 * sigma1 * y2 - (delta_q + mu) * y4",
            "(1 - p1) * sigma1 * y2 + (1 - p2) * gamma2 * y3 - beta * y5 * (y2 + y3) / {N} - mu * y5",
            "(p_n * beta * y1 + p_s * beta * y5 + beta_e * y7) * (y2 + y3) / {N} + delta1 * y2 + delta2 * y3 + delta_q * y4 - (mu + d) * y6",
            "q * Lambda - beta_e * y7 * (y2 + y3) / {N} - mu * y7",
        ],
        native: lung_cancer,
    },
    ModelEntry {
        name: "hepatitis-b",
        description: "Hepatitis B transmission with vaccination and age structure (8 compartments)",
        notes: "Births and mixing use N, the 8-state total",
        states: &["Su", "Sf", "V", "Au", "Af", "Cu", "Cf", "R"],
        default_orders: &[1.0; 8],
        init: &[
            &[23148265.0],
            &[51967535.0],
            &[16528817.0],
            &[3012259.0],
            &[5280601.0],
            &[5394338.0],
            &[6315313.0],
            &[40570172.0],
        ],
        params: &[
            ("b", 0.036),
            ("c", 20.0),
            ("delta_a", 0.007),
            ("delta_c", 0.001),
            ("eps_c", 0.8),
            ("eps_rho", 0.9),
            ("eta", 0.667),
            ("gamma_c", 0.015),
            ("mu", 0.021),
            ("p", 0.079),
            ("phi", 0.159),
            ("sigma_a", 2.667),
            ("sigma_c", 0.068),
            ("sigma_s", 0.067),
            ("tau_b", 0.66),
            ("tau_c", 0.2),
            ("tau_f", 0.001),
            ("tau_u", 0.001),
            ("theta", 0.724),
            ("varphi_f", 0.1),
            ("varphi_u", 0.885),
            ("w", 0.04),
        ],
        rhs_templates: &[
            "b * {N} * (1 - eps_rho * tau_b) - (b * theta * (y5 + phi * y7) * (1 - eps_rho * tau_b)) - (sigma_s + eps_rho * tau_u + mu) * y1",
            "sigma_s * y1 + w * y3 - (p * c * (y5 + eta * y7) * (1 - eps_c * tau_c) / {N} * y2) - (eps_rho * tau_f + mu) * y2",
            "b * {N} * eps_rho * tau_b + eps_rho * tau_u * y1 + eps_rho * tau_f * y2 - (w + mu) * y3",
            "b * theta * (y5 + phi * y7) * (1 - eps_rho * tau_b) - (sigma_a + mu + delta_a) * y4",
            "p * c * (y5 + eta * y7) * (1 - eps_c * tau_c) / {N} * y2 - (sigma_a + mu + delta_a) * y5",
            "sigma_a * varphi_u * y4 - (sigma_c + mu) * y6",
            "sigma_a * varphi_f * y5 + sigma_c * y6 - (gamma_c + mu + delta_c) * y7",
            "sigma_a * (1 - varphi_u) * y4 + sigma_a * (1 - varphi_f) * y5 + gamma_c * y7 - mu * y8",
        ],
        native: hepatitis_b,
    },
];

/// All registered models.
pub fn registry() -> &'static [ModelEntry] {
    REGISTRY
}

/// Names of all registered models.
pub fn list_models() -> Vec<&'static str> {
    REGISTRY.iter().map(|m| m.name).collect()
}

pub fn model_entry(name: &str) -> Result<&'static ModelEntry> {
    REGISTRY.iter().find(|m| m.name == name).ok_or_else(|| {
        Error::Lookup(format!(
            "unknown model `{name}`; known: {}",
            list_models().join(", ")
        ))
    })
}

/// Builds a registered model with parameter overrides and optional per-state orders.
pub fn get_model(
    name: &str,
    overrides: &Params,
    orders: Option<&[f64]>,
) -> Result<FractionalSystem> {
    model_entry(name)?.build(overrides, orders)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rhs_at(system: &FractionalSystem, t: f64, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; system.n()];
        system.eval_rhs(t, y, &mut out).unwrap();
        out
    }

    fn initial(system: &FractionalSystem) -> Vec<f64> {
        system.init().iter().map(|d| d[0]).collect()
    }

    #[test]
    fn catalog() {
        let names = list_models();
        assert_eq!(names.len(), 6);
        assert!(names.contains(&"smoking"));
        for name in names {
            let s = get_model(name, &Params::new(), None).unwrap();
            let f = rhs_at(&s, 0.0, &initial(&s));
            assert!(f.iter().all(|v| v.is_finite()), "{name}");
        }
    }

    #[test]
    fn smoking_defaults() {
        let e = model_entry("smoking").unwrap();
        let s = e.build(&Params::new(), None).unwrap();
        assert_eq!(initial(&s), vec![8000.0, 1970.0, 20.0, 10.0, 0.0]);
        let d = e.defaults();
        assert_eq!((d["beta"], d["pi"], d["mu"]), (2.0, 14.0, 0.031));
    }

    #[test]
    fn hepatitis_defaults() {
        let e = model_entry("hepatitis-b").unwrap();
        let s = e.build(&Params::new(), None).unwrap();
        assert_eq!(s.n(), 8);
        assert_eq!(initial(&s)[0], 23148265.0);
        assert_eq!((e.defaults()["b"], e.defaults()["theta"]), (0.036, 0.724));
    }

    #[test]
    fn example_63_initial_rhs() {
        let s = get_model("example-6.3", &Params::new(), Some(&[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(rhs_at(&s, 0.0, &initial(&s)), vec![2.0, 0.0, 1.0]);
    }

    #[test]
    fn example_61_keeps_derivative_data() {
        let s = get_model("example-6.1", &Params::new(), None).unwrap();
        assert_eq!(s.init(), &[vec![0.0, 1.0], vec![0.0, 1.0, 1.0]]);
        let s = get_model("example-6.1", &Params::new(), Some(&[0.8, 0.9])).unwrap();
        assert_eq!(s.init(), &[vec![0.0], vec![0.0]]);
        assert!(get_model("example-6.2", &Params::new(), Some(&[1.5, 1.0])).is_err());
    }

    #[test]
    fn smoking_population_balance() {
        let s = get_model("smoking", &Params::new(), None).unwrap();
        let y = initial(&s);
        let f = rhs_at(&s, 0.0, &y);
        let d = model_entry("smoking").unwrap().defaults();
        let n: f64 = y.iter().sum();
        let want = d["pi"] - d["mu"] * n - d["delta"] * y[3];
        let got: f64 = f.iter().sum();
        assert!(((got - want) / want).abs() <= 1e-9, "{got} vs {want}");
    }

    #[test]
    fn override_reaches_rhs() {
        let base = get_model("smoking", &Params::new(), None).unwrap();
        let mut o = Params::new();
        o.insert("pi".into(), 20.0);
        let changed = get_model("smoking", &o, None).unwrap();
        let y = initial(&base);
        let (a, b) = (rhs_at(&base, 0.0, &y), rhs_at(&changed, 0.0, &y));
        // d f1 / d pi = 1 - p, d f2 / d pi = p
        assert!(((b[0] - a[0]) - 6.0 * 0.2).abs() < 1e-9);
        assert!(((b[1] - a[1]) - 6.0 * 0.8).abs() < 1e-9);
    }

    #[test]
    fn lookup_and_shape_errors() {
        assert!(matches!(
            get_model("nope", &Params::new(), None),
            Err(Error::Lookup(_))
        ));
        let mut o = Params::new();
        o.insert("zeta".into(), 1.0);
        assert!(matches!(
            get_model("smoking", &o, None),
            Err(Error::Lookup(_))
        ));
        assert!(matches!(
            get_model("smoking", &Params::new(), Some(&[1.0, 1.0])),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn zero_population_is_rejected() {
        let s = get_model("smoking", &Params::new(), None).unwrap();
        let mut out = vec![0.0; 5];
        assert!(matches!(
            s.eval_rhs(0.0, &[0.0; 5], &mut out),
            Err(Error::Model { .. })
        ));
    }
}
