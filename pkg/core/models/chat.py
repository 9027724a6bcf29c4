from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

# OpenAI caps the system message at this many characters
SYSTEM_MESSAGE_CAP = 512


class ChatRequest(BaseModel):
    model_config = ConfigDict(frozen=True)

    system_message: str = Field(max_length=SYSTEM_MESSAGE_CAP)
    user_prompt: str
    n: int = Field(default=1, ge=1)
    temperature: float = Field(default=1.0, ge=0)
    model_id: str

    def key_fields(self):
        return {
            'model_id': self.model_id,
            'temperature': self.temperature,
            'n': self.n,
            'system_message': self.system_message,
            'user_prompt': self.user_prompt,
        }


class ChatUsage(BaseModel):
    prompt_tokens: int = 0
    completion_tokens: int = 0
    total_tokens: int = 0


class ChatResponse(BaseModel):
    completions: list[str]
    usage: Optional[ChatUsage] = None
    provider_meta: str = ''


class ProviderKind(str, Enum):
    HTTP_OPENAI_COMPATIBLE = 'http_openai_compatible'
    SCRIPTED = 'scripted'
    REPLAY = 'replay'
