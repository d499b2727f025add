"""Tests for kahler-circles."""
