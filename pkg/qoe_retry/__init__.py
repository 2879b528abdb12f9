"""
QoE Retry Limit
Priority-based MAC retry limits for IPPP video teleconferencing over WiFi.
Analytic model, Bernoulli and DCF channels, and a seeded experiment harness.
"""

__version__ = "1.0"
