use crate::error::{CliError, Result};
use bregkern_core::manifolds::{
    CategoricalManifold, DiscreteMixtureManifold, EKL2DManifold, GaussianManifold,
    MultinomialManifold, PSDManifold,
};
use bregkern_core::BregmanManifold;

/// A manifold selected on the command line by a textual descriptor.
pub enum AppManifold {
    Gaussian(GaussianManifold),
    Categorical(CategoricalManifold),
    Multinomial(MultinomialManifold),
    Mixture(DiscreteMixtureManifold),
    Psd(PSDManifold),
    Ekl2d(EKL2DManifold),
}

fn parse_param(desc: &str, part: Option<&str>, what: &str) -> Result<usize> {
    part.ok_or_else(|| CliError::invalid(format!("manifold '{desc}' is missing its {what}")))?
        .parse::<usize>()
        .map_err(|_| CliError::invalid(format!("manifold '{desc}': {what} must be a positive integer")))
}

impl AppManifold {
    /// Parses descriptors of the form `gaussian:<d>`, `categorical:<k>`,
    /// `multinomial:<k>:<n>`, `mixture:<k>`, `psd:<d>`, `ekl2d`.
    pub fn parse(desc: &str) -> Result<Self> {
        let mut parts = desc.split(':');
        let name = parts.next().unwrap_or_default();
        let out = match name {
            "gaussian" => {
                AppManifold::Gaussian(GaussianManifold::new(parse_param(desc, parts.next(), "dimension")?)?)
            }
            "categorical" => AppManifold::Categorical(CategoricalManifold::new(parse_param(
                desc,
                parts.next(),
                "category count",
            )?)?),
            "multinomial" => {
                let k = parse_param(desc, parts.next(), "category count")?;
                let n = parse_param(desc, parts.next(), "trial count")?;
                AppManifold::Multinomial(MultinomialManifold::new(k, n)?)
            }
            "mixture" => AppManifold::Mixture(DiscreteMixtureManifold::new(parse_param(
                desc,
                parts.next(),
                "component count",
            )?)?),
            "psd" => AppManifold::Psd(PSDManifold::new(parse_param(desc, parts.next(), "side length")?)?),
            "ekl2d" => AppManifold::Ekl2d(EKL2DManifold::new()?),
            _ => {
                return Err(CliError::invalid(format!(
                    "unknown manifold '{desc}' (expected gaussian:<d>, categorical:<k>, \
                     multinomial:<k>:<n>, mixture:<k>, psd:<d>, or ekl2d)"
                )))
            }
        };
        if parts.next().is_some() {
            return Err(CliError::invalid(format!("manifold '{desc}' has trailing parameters")));
        }
        Ok(out)
    }

    pub fn manifold(&self) -> &BregmanManifold {
        match self {
            AppManifold::Gaussian(m) => m.manifold(),
            AppManifold::Categorical(m) => m.manifold(),
            AppManifold::Multinomial(m) => m.manifold(),
            AppManifold::Mixture(m) => m.manifold(),
            AppManifold::Psd(m) => m.manifold(),
            AppManifold::Ekl2d(m) => m.manifold(),
        }
    }
}
