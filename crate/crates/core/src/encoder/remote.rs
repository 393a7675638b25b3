use std::time::Duration;

use serde::{Deserialize, Serialize};
use ureq::Agent;

use crate::encoder::{EncoderError, EncoderMode, QueryEncoder};
use crate::types::normalize;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodeRequest {
    pub text: String,
    pub mode: EncoderMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodeResponse {
    pub vector: Vec<f32>,
}

/// Client for an external text encoder speaking
/// `POST {text, mode}` → `{vector: [...]}`.
#[derive(Debug, Clone)]
pub struct RemoteEncoder {
    endpoint: String,
    dimension: usize,
    agent: Agent,
}

impl RemoteEncoder {
    pub fn new(endpoint: impl Into<String>, dimension: usize) -> Self {
        RemoteEncoder::with_timeout(endpoint, dimension, Duration::from_secs(10))
    }

    pub fn with_timeout(endpoint: impl Into<String>, dimension: usize, timeout: Duration) -> Self {
        let agent: Agent = Agent::config_builder().timeout_global(Some(timeout)).build().into();
        RemoteEncoder { endpoint: endpoint.into(), dimension, agent }
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    /// Sends `text`, validates the returned dimension, and normalises.
    pub fn remote_encode(&self, text: &str, mode: EncoderMode) -> Result<Vec<f32>, EncoderError> {
        let request = EncodeRequest { text: text.to_string(), mode };
        let mut response = self
            .agent
            .post(&self.endpoint)
            .send_json(&request)
            .map_err(|e| EncoderError::EncoderUnavailable(e.to_string()))?;
        let body: EncodeResponse = response
            .body_mut()
            .read_json()
            .map_err(|e| EncoderError::InvalidResponse(e.to_string()))?;
        if body.vector.len() != self.dimension {
            return Err(EncoderError::DimensionMismatch { expected: self.dimension, got: body.vector.len() });
        }
        normalize(&body.vector).ok_or_else(|| EncoderError::InvalidResponse("zero or non-finite vector".into()))
    }
}

impl QueryEncoder for RemoteEncoder {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn encode(&self, text: &str, mode: EncoderMode) -> Result<Vec<f32>, EncoderError> {
        self.remote_encode(text, mode)
    }
}
