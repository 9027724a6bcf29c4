from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict

from .proof import Diagnostic


class PromptVariant(str, Enum):
    BASE = 'base'
    CHAIN_OF_THOUGHT = 'chain_of_thought'


class RetryContext(BaseModel):
    model_config = ConfigDict(frozen=True)

    previous_body: str
    previous_diagnostics: tuple[Diagnostic, ...] = ()


class PromptMode(BaseModel):
    model_config = ConfigDict(frozen=True)

    variant: PromptVariant = PromptVariant.BASE
    medium_in_prompt: bool = False
    retry_context: Optional[RetryContext] = None
    # Replaces the built-in system message (still capped at 512 characters)
    system_message_override: Optional[str] = None

    def for_retry(self, context):
        return self.model_copy(update={'retry_context': context})


class PromptProvenance(BaseModel):
    case_id: str
    mode: str
    attempt_index: int = 0


class PromptBundle(BaseModel):
    system_message: str
    user_prompt: str
    provenance: PromptProvenance
