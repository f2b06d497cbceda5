//! Chat-completion backends: a live HTTP client and an offline fixture
//! reader with the same interface.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::harness::config::EndpointConfig;
use crate::harness::prompt::PromptBundle;

/// A completed model call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackendResponse {
    pub text: String,
    /// Requests made, including retries; always 1 for fixtures.
    pub attempts: u32,
}

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("credential environment variable {0} is not set")]
    CredentialMissing(String),
    #[error("endpoint unreachable after {attempts} attempts: {message}")]
    EndpointUnreachable { attempts: u32, message: String },
    #[error("malformed endpoint response: {0}")]
    MalformedResponse(String),
    #[error("no fixture transcript for case {0}")]
    MissingFixture(String),
    #[error("cannot read fixture transcript: {0}")]
    FixtureIo(#[from] std::io::Error),
}

/// Anything that can answer a prompt: the live endpoint or canned fixtures.
pub trait ChatBackend {
    fn complete(&self, prompt: &PromptBundle) -> Result<BackendResponse, ClientError>;
    /// Model name recorded alongside responses.
    fn model_name(&self) -> &str;
}

/// Live client speaking the chat-completions wire format.
pub struct HttpBackend {
    endpoint: EndpointConfig,
    credential: String,
    client: reqwest::blocking::Client,
}

impl HttpBackend {
    /// Reads the credential from the configured environment variable and
    /// prepares the client. Fails before any network activity when the
    /// variable is unset.
    pub fn new(endpoint: EndpointConfig) -> Result<HttpBackend, ClientError> {
        let credential = std::env::var(&endpoint.credential_env)
            .map_err(|_| ClientError::CredentialMissing(endpoint.credential_env.clone()))?;
        let client = reqwest::blocking::Client::builder()
            .timeout(endpoint.timeout())
            .build()
            .map_err(|e| ClientError::EndpointUnreachable {
                attempts: 0,
                message: e.to_string(),
            })?;
        Ok(HttpBackend {
            endpoint,
            credential,
            client,
        })
    }

    fn request_once(&self, prompt: &PromptBundle) -> Result<String, String> {
        #[derive(Deserialize)]
        struct Completion {
            choices: Vec<Choice>,
        }
        #[derive(Deserialize)]
        struct Choice {
            message: Message,
        }
        #[derive(Deserialize)]
        struct Message {
            content: String,
        }

        let url = format!(
            "{}/chat/completions",
            self.endpoint.base_url.trim_end_matches('/')
        );
        let body = serde_json::json!({
            "model": self.endpoint.model,
            "temperature": self.endpoint.temperature,
            "messages": [
                { "role": "system", "content": prompt.system_instruction },
                { "role": "user", "content": prompt.user_message },
            ],
        });
        let response = self
            .client
            .post(url)
            .bearer_auth(&self.credential)
            .json(&body)
            .send()
            .map_err(|e| e.to_string())?
            .error_for_status()
            .map_err(|e| e.to_string())?;
        let completion: Completion = response.json().map_err(|e| e.to_string())?;
        completion
            .choices
            .into_iter()
            .next()
            .map(|choice| choice.message.content)
            .ok_or_else(|| "response contained no choices".to_owned())
    }
}

impl ChatBackend for HttpBackend {
    fn complete(&self, prompt: &PromptBundle) -> Result<BackendResponse, ClientError> {
        let mut last_error = String::new();
        let tries = self.endpoint.max_retries + 1;
        for attempt in 1..=tries {
            match self.request_once(prompt) {
                Ok(text) => {
                    return Ok(BackendResponse {
                        text,
                        attempts: attempt,
                    })
                }
                Err(message) => {
                    last_error = message;
                    if attempt < tries {
                        std::thread::sleep(std::time::Duration::from_millis(
                            250 * u64::from(attempt),
                        ));
                    }
                }
            }
        }
        Err(ClientError::EndpointUnreachable {
            attempts: tries,
            message: last_error,
        })
    }

    fn model_name(&self) -> &str {
        &self.endpoint.model
    }
}

/// Offline backend answering from `<dir>/<case id>.txt` transcripts.
pub struct FixtureBackend {
    dir: PathBuf,
    model: String,
}

impl FixtureBackend {
    pub fn new(dir: impl Into<PathBuf>) -> FixtureBackend {
        FixtureBackend {
            dir: dir.into(),
            model: "fixture".to_owned(),
        }
    }

    pub fn transcript_path(&self, case_id: &str) -> PathBuf {
        self.dir.join(format!("{case_id}.txt"))
    }
}

impl ChatBackend for FixtureBackend {
    fn complete(&self, prompt: &PromptBundle) -> Result<BackendResponse, ClientError> {
        let path = self.transcript_path(&prompt.case_id);
        if !path.exists() {
            return Err(ClientError::MissingFixture(prompt.case_id.clone()));
        }
        Ok(BackendResponse {
            text: std::fs::read_to_string(path)?,
            attempts: 1,
        })
    }

    fn model_name(&self) -> &str {
        &self.model
    }
}

/// Test double that fails a fixed number of times before succeeding; used to
/// exercise retry handling without a network.
#[cfg(test)]
pub struct FlakyBackend {
    pub failures: std::sync::atomic::AtomicU32,
    pub text: String,
}

#[cfg(test)]
impl ChatBackend for FlakyBackend {
    fn complete(&self, _prompt: &PromptBundle) -> Result<BackendResponse, ClientError> {
        use std::sync::atomic::Ordering;
        let remaining = self.failures.load(Ordering::SeqCst);
        if remaining > 0 {
            self.failures.store(remaining - 1, Ordering::SeqCst);
            return Err(ClientError::EndpointUnreachable {
                attempts: 1,
                message: "simulated outage".to_owned(),
            });
        }
        Ok(BackendResponse {
            text: self.text.clone(),
            attempts: 1,
        })
    }

    fn model_name(&self) -> &str {
        "flaky"
    }
}

/// Reads the fixture transcript for a case id straight from a directory.
pub fn fixture_exists(dir: &Path, case_id: &str) -> bool {
    dir.join(format!("{case_id}.txt")).exists()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::prompt::build_prompt_from;

    #[test]
    fn fixtures_answer_by_case_id() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("case_a.txt"), "A0000000 is an Arkon.").unwrap();
        let backend = FixtureBackend::new(dir.path());
        let response = backend
            .complete(&build_prompt_from("case_a", &[]))
            .unwrap();
        assert_eq!(response.text, "A0000000 is an Arkon.");
        assert_eq!(response.attempts, 1);
    }

    #[test]
    fn missing_fixtures_are_reported_by_case_id() {
        let dir = tempfile::tempdir().unwrap();
        let backend = FixtureBackend::new(dir.path());
        match backend.complete(&build_prompt_from("case_b", &[])) {
            Err(ClientError::MissingFixture(id)) => assert_eq!(id, "case_b"),
            other => panic!("expected missing fixture, got {other:?}"),
        }
    }

    #[test]
    fn http_backend_requires_the_credential_up_front() {
        let endpoint = EndpointConfig {
            base_url: "http://localhost:1".to_owned(),
            model: "m".to_owned(),
            credential_env: "ARKON_TEST_UNSET_CREDENTIAL".to_owned(),
            temperature: 0.0,
            timeout_secs: 1,
            max_retries: 0,
        };
        match HttpBackend::new(endpoint) {
            Err(ClientError::CredentialMissing(var)) => {
                assert_eq!(var, "ARKON_TEST_UNSET_CREDENTIAL")
            }
            Ok(_) => panic!("expected missing credential"),
            Err(other) => panic!("expected missing credential, got {other:?}"),
        }
    }
}
