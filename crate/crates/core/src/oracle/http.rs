//! Text-completion client for an OpenAI-style `/v1/completions` endpoint.
//!
//! Request body: `{"model", "prompt", "max_tokens", "temperature", "stop"}`.
//! The completion is read from `choices[0].text`, falling back to a top-level
//! `content` or `text` field (llama.cpp / TGI style servers).

use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Oracle, OracleError, OracleQuery};

/// Environment variable holding the bearer token sent to the endpoint.
pub const API_KEY_ENV: &str = "RSTPROMPT_API_KEY";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetryPolicy {
    /// Retries after the first attempt; total attempts are `max_retries + 1`.
    pub max_retries: u32,
    pub base_delay_ms: u64,
    pub factor: f64,
    pub max_delay_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_retries: 3,
            base_delay_ms: 500,
            factor: 2.0,
            max_delay_ms: 10_000,
        }
    }
}

impl RetryPolicy {
    /// Delay before retry number `retry` (0-based).
    pub fn delay(&self, retry: u32) -> Duration {
        let ms = self.base_delay_ms as f64 * self.factor.powi(retry as i32);
        Duration::from_millis(ms.min(self.max_delay_ms as f64) as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HttpOracleConfig {
    pub endpoint: String,
    pub model: String,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: u32,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_timeout")]
    pub timeout_secs: u64,
    #[serde(default)]
    pub retry: RetryPolicy,
}

fn default_max_tokens() -> u32 {
    16
}

fn default_timeout() -> u64 {
    60
}

impl HttpOracleConfig {
    pub fn new(endpoint: &str, model: &str) -> Self {
        HttpOracleConfig {
            endpoint: endpoint.to_string(),
            model: model.to_string(),
            max_tokens: default_max_tokens(),
            temperature: 0.0,
            timeout_secs: default_timeout(),
            retry: RetryPolicy::default(),
        }
    }
}

#[derive(Debug)]
pub struct HttpOracle {
    config: HttpOracleConfig,
    agent: ureq::Agent,
    api_key: Option<String>,
}

fn is_retryable(status: u16) -> bool {
    status == 408 || status == 429 || (500..600).contains(&status)
}

impl HttpOracle {
    /// Validates the configuration; the token is read from [`API_KEY_ENV`] if set.
    pub fn new(config: HttpOracleConfig) -> Result<Self, OracleError> {
        let api_key = std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty());
        Self::with_api_key(config, api_key)
    }

    pub fn with_api_key(
        config: HttpOracleConfig,
        api_key: Option<String>,
    ) -> Result<Self, OracleError> {
        let url = url::Url::parse(&config.endpoint)
            .map_err(|e| OracleError::Config(format!("endpoint `{}`: {e}", config.endpoint)))?;
        if !matches!(url.scheme(), "http" | "https") {
            return Err(OracleError::Config(format!(
                "endpoint `{}` must use http or https",
                config.endpoint
            )));
        }
        if config.model.trim().is_empty() {
            return Err(OracleError::Config("model id is empty".into()));
        }
        if config.timeout_secs == 0 || config.max_tokens == 0 {
            return Err(OracleError::Config(
                "timeout and max_tokens must be positive".into(),
            ));
        }
        if config.retry.factor.is_nan() || config.retry.factor < 1.0 {
            return Err(OracleError::Config("retry factor must be >= 1".into()));
        }
        let agent = ureq::AgentBuilder::new()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build();
        Ok(HttpOracle {
            config,
            agent,
            api_key,
        })
    }

    pub fn config(&self) -> &HttpOracleConfig {
        &self.config
    }

    fn request_body(&self, prompt: &str) -> Value {
        json!({
            "model": self.config.model,
            "prompt": prompt,
            "max_tokens": self.config.max_tokens,
            "temperature": self.config.temperature,
            "stop": ["\n"],
        })
    }

    fn attempt(&self, body: &Value) -> Result<String, (bool, String)> {
        let mut req = self.agent.post(&self.config.endpoint);
        if let Some(key) = &self.api_key {
            req = req.set("Authorization", &format!("Bearer {key}"));
        }
        match req.send_json(body.clone()) {
            Ok(resp) => {
                let value: Value = resp
                    .into_json()
                    .map_err(|e| (false, format!("unreadable response body: {e}")))?;
                extract_completion(&value)
                    .ok_or_else(|| (false, format!("no completion text in response: {value}")))
            }
            Err(ureq::Error::Status(code, resp)) => {
                let detail = resp.into_string().unwrap_or_default();
                Err((
                    is_retryable(code),
                    format!("HTTP {code}: {}", detail.trim()),
                ))
            }
            Err(ureq::Error::Transport(t)) => Err((true, format!("transport: {t}"))),
        }
    }
}

fn extract_completion(value: &Value) -> Option<String> {
    value
        .pointer("/choices/0/text")
        .or_else(|| value.pointer("/choices/0/message/content"))
        .or_else(|| value.get("content"))
        .or_else(|| value.get("text"))
        .and_then(Value::as_str)
        .map(str::to_string)
}

impl Oracle for HttpOracle {
    fn complete(&self, query: &OracleQuery) -> Result<String, OracleError> {
        let body = self.request_body(&query.prompt);
        let mut attempts = 0;
        loop {
            attempts += 1;
            match self.attempt(&body) {
                Ok(text) => return Ok(text),
                Err((retryable, message)) => {
                    let retries_used = attempts - 1;
                    if !retryable || retries_used >= self.config.retry.max_retries {
                        return Err(OracleError::Failure { attempts, message });
                    }
                    let wait = self.config.retry.delay(retries_used);
                    log::warn!(
                        "completion attempt {attempts} failed ({message}); retrying in {wait:?}"
                    );
                    thread::sleep(wait);
                }
            }
        }
    }

    fn fingerprint(&self) -> String {
        format!(
            "http|model={}|max_tokens={}|temperature={}|stop=\\n",
            self.config.model, self.config.max_tokens, self.config.temperature
        )
    }
}
