use adm_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config: {0}")]
    Config(String),
    #[error("{functional}: {source}")]
    Evaluation {
        functional: String,
        #[source]
        source: Error,
    },
    #[error("output: {0}")]
    Output(String),
}

impl RunError {
    pub fn eval(functional: &str) -> impl FnOnce(Error) -> RunError + '_ {
        move |source| RunError::Evaluation {
            functional: functional.to_string(),
            source,
        }
    }

    /// 2 for configuration and domain problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Evaluation { source, .. } if source.root().is_numerical() => 3,
            _ => 2,
        }
    }
}
