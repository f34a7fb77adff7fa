"""Host-agnostic engine for exploring daily personal health metrics with
natural-language time and command input, plus touch-context fusion."""

__version__ = "0.1.0"
