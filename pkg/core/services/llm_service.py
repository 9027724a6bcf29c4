"""
Chat-completion providers.

Every provider answers `complete(request)` with a ChatResponse holding the
request's `n` completions. The OpenAI-compatible provider talks HTTP; the
scripted, replay and recording providers keep runs hermetic.
"""
import logging
import threading
import time

import openai
from django.conf import settings
from django.core.exceptions import ValidationError

from ..exceptions import AuthError, ProviderError, RateLimited, ScriptExhausted
from ..models import ChatRequest, ChatResponse, ChatUsage, ProviderKind
from .ada_lex import restore_cuts
from .cassette import Cassette, request_digest

logger = logging.getLogger(__name__)


def request_key(request):
    """Cassette key: model, temperature, n and both messages"""
    return request_digest(request.key_fields())


class ChatProvider:
    kind = None

    def complete(self, request):
        raise NotImplementedError

    def describe(self):
        """Provider identity for run metadata (never includes credentials)"""
        return self.kind.value


class OpenAIChatProvider(ChatProvider):
    """OpenAI-compatible chat completions over HTTP"""
    kind = ProviderKind.HTTP_OPENAI_COMPATIBLE

    def __init__(self, api_key=None, base_url=None, max_attempts=None, backoff_seconds=None,
                 timeout=None, client=None, sleep=time.sleep):
        self.base_url = base_url if base_url is not None else settings.LLM_BASE_URL
        self.max_attempts = max_attempts or settings.LLM_MAX_ATTEMPTS
        self.backoff_seconds = backoff_seconds if backoff_seconds is not None else settings.LLM_BACKOFF_SECONDS
        self._sleep = sleep

        if client is None:
            api_key = api_key or settings.OPENAI_API_KEY
            if not api_key:
                raise ValidationError("OPENAI_API_KEY is not configured")
            # Retries are ours, so the SDK's own retry loop is disabled
            client = openai.OpenAI(
                api_key=api_key,
                base_url=self.base_url,
                timeout=timeout or settings.LLM_REQUEST_TIMEOUT,
                max_retries=0,
            )
        self.client = client

    def describe(self):
        return f"{self.kind.value}:{self.base_url or 'api.openai.com'}"

    def complete(self, request):
        for attempt in range(1, self.max_attempts + 1):
            try:
                response = self.client.chat.completions.create(
                    model=request.model_id,
                    messages=[
                        {"role": "system", "content": request.system_message},
                        {"role": "user", "content": request.user_prompt},
                    ],
                    n=request.n,
                    temperature=request.temperature,
                )
                return self._to_response(response)
            except openai.AuthenticationError as e:
                raise AuthError(f"Provider rejected the credentials ({e.status_code})") from None
            except (openai.RateLimitError, openai.APIConnectionError) as e:
                if attempt == self.max_attempts:
                    if isinstance(e, openai.RateLimitError):
                        raise RateLimited(f"Rate limited after {attempt} attempts") from e
                    raise ProviderError(f"Connection failed after {attempt} attempts: {e}") from e
                delay = self.backoff_seconds * (2 ** (attempt - 1))
                logger.warning(f"{type(e).__name__} from provider, retrying in {delay:.1f}s (attempt {attempt})")
                self._sleep(delay)
            except openai.APIError as e:
                raise ProviderError(f"Provider error: {e}") from e

        raise ProviderError("No attempts were made")

    @staticmethod
    def _to_response(response):
        choices = sorted(response.choices, key=lambda choice: choice.index)
        completions = [choice.message.content or '' for choice in choices]
        if not completions:
            raise ProviderError("Provider returned no completions")

        usage = None
        if getattr(response, 'usage', None):
            usage = ChatUsage(
                prompt_tokens=response.usage.prompt_tokens or 0,
                completion_tokens=response.usage.completion_tokens or 0,
                total_tokens=response.usage.total_tokens or 0,
            )
        return ChatResponse(completions=completions, usage=usage, provider_meta=response.model or '')


class ScriptedProvider(ChatProvider):
    """Answers from a fixed script or a responder callable.

    A script entry is either a list of completions or a single string,
    which is repeated `n` times. Responders may return either form too.
    """
    kind = ProviderKind.SCRIPTED

    def __init__(self, script=None, responder=None):
        if script is None and responder is None:
            raise ValidationError("A scripted provider needs a script or a responder")
        self._script = list(script or [])
        self._responder = responder
        self._lock = threading.Lock()
        self.requests = []

    def complete(self, request):
        with self._lock:
            self.requests.append(request)
            if self._responder is not None:
                reply = self._responder(request)
            elif self._script:
                reply = self._script.pop(0)
            else:
                raise ScriptExhausted(f"Script exhausted after {len(self.requests) - 1} requests")

        completions = [reply] * request.n if isinstance(reply, str) else list(reply)
        if not completions:
            raise ProviderError("Scripted reply has no completions")
        return ChatResponse(completions=completions, provider_meta='scripted')


class ReplayProvider(ChatProvider):
    kind = ProviderKind.REPLAY

    def __init__(self, cassette):
        self.cassette = cassette if isinstance(cassette, Cassette) else Cassette(cassette)

    def complete(self, request):
        entry = self.cassette.get(request_key(request))
        return ChatResponse.model_validate(entry['response'])


class RecordingProvider(ChatProvider):
    """Wraps another provider and appends every exchange to a cassette"""

    def __init__(self, inner, cassette):
        self.inner = inner
        self.kind = inner.kind
        self.cassette = cassette if isinstance(cassette, Cassette) else Cassette(cassette)

    def describe(self):
        return f"recording({self.inner.describe()})"

    def complete(self, request):
        response = self.inner.complete(request)
        key = request_key(request)
        self.cassette.put(key, {
            'request': request.key_fields(),
            'response': response.model_dump(mode='json'),
        })
        logger.info(f"Recorded chat completion {key[:12]} ({len(response.completions)} completions)")
        return response


def complete(provider, request):
    """Validate the request, then ask the provider for its completions"""
    if not isinstance(request, ChatRequest):
        request = ChatRequest.model_validate(request)
    response = provider.complete(request)
    if not response.completions:
        raise ProviderError("Provider returned no completions")
    return response


def oracle_body(case):
    """The unmutated target body, rebuilt from the case's cuts"""
    return restore_cuts(case.mutated_body, case.cuts)


def oracle_responder(cases):
    """Responder answering with the fenced oracle body of the prompted case"""
    bodies = sorted(
        ((case.mutated_body.rstrip('\n'), oracle_body(case)) for case in cases),
        key=lambda pair: len(pair[0]),
        reverse=True,
    )

    def respond(request):
        for mutated, original in bodies:
            if mutated in request.user_prompt:
                if not original.endswith('\n'):
                    original += '\n'
                return f"Restoring the missing annotations.\n\n```ada\n{original}```\n"
        return "I could not identify the package body in this prompt."

    return respond


def build_provider(kind, cassette=None, cases=None, record_to=None):
    """Provider for a CLI/config name: openai, replay or oracle"""
    if kind == 'openai':
        provider = OpenAIChatProvider()
    elif kind == 'replay':
        if cassette is None:
            raise ValidationError("The replay provider requires a cassette")
        provider = ReplayProvider(cassette)
    elif kind == 'oracle':
        provider = ScriptedProvider(responder=oracle_responder(cases or []))
    else:
        raise ValidationError(f"Unknown provider {kind}")

    if record_to is not None:
        provider = RecordingProvider(provider, record_to)
    return provider
