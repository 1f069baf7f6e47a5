"""
Unit tests for scenario files and unit conversion.
"""
import json
import os
import sys
import tempfile
import unittest

# Add the parent directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config
from optics.utils import DomainError
from reporting.scenarios import ScenarioConfig, convert_input, load_scenario


class TestConvertInput(unittest.TestCase):
    """Test cases for convert_input."""

    def test_lengths(self):
        """Test the accepted length units."""
        self.assertEqual(convert_input("xe", "length", {"value": 1.0, "unit": "AU"}), config.ASTRONOMICAL_UNIT)
        self.assertAlmostEqual(convert_input("rs", "length", {"value": 2.953, "unit": "km"}), 2953.0, places=9)
        self.assertEqual(convert_input("ra", "length", {"value": 3, "unit": "m"}), 3.0)

    def test_other_kinds(self):
        """Test wave numbers, counts, dimensionless values and choices."""
        self.assertAlmostEqual(convert_input("kappa", "wavenumber", {"value": 50.0, "unit": "1/km"}), 0.05, places=15)
        samples = convert_input("samples", "count", {"value": 200.0})
        self.assertEqual(samples, 200)
        self.assertIsInstance(samples, int)
        self.assertEqual(convert_input("ecc", "dimensionless", {"value": 0.2, "unit": "1"}), 0.2)
        self.assertEqual(convert_input("case", "choice", {"value": "kepler"}), "kepler")

    def test_missing_unit(self):
        """Test that physical quantities need an explicit unit."""
        with self.assertRaises(DomainError):
            convert_input("xe", "length", {"value": 1.0})
        with self.assertRaises(DomainError):
            convert_input("xe", "length", {"value": 1.0, "unit": "pc"})

    def test_malformed_entries(self):
        """Test that bare numbers, extra keys and wrong types are rejected."""
        with self.assertRaises(DomainError):
            convert_input("xe", "length", 1.0)
        with self.assertRaises(DomainError):
            convert_input("xe", "length", {"value": 1.0, "unit": "m", "note": "x"})
        with self.assertRaises(DomainError):
            convert_input("xe", "length", {"value": "1", "unit": "m"})
        with self.assertRaises(DomainError):
            convert_input("samples", "count", {"value": 2.5})
        with self.assertRaises(DomainError):
            convert_input("samples", "count", {"value": True})
        with self.assertRaises(DomainError):
            convert_input("case", "choice", {"value": 3})


class TestScenarioConfig(unittest.TestCase):
    """Test cases for ScenarioConfig validation."""

    def test_from_dict(self):
        """Test a complete delay scenario."""
        scenario = ScenarioConfig.from_dict({
            "command": "delay",
            "format": "json",
            "output": "out/delay.json",
            "inputs": {"xe": {"value": 1.0, "unit": "AU"}, "rs": {"value": 3.0, "unit": "km"}},
            "tolerances": {"path": 1e-9}
        })
        self.assertEqual(scenario.command, "delay")
        self.assertEqual(scenario.format, "json")
        self.assertEqual(scenario.inputs, {"xe": config.ASTRONOMICAL_UNIT, "rs": 3000.0})
        self.assertEqual(scenario.to_dict(), {
            'command': "delay",
            'format': "json",
            'output': "out/delay.json",
            'inputs': {"xe": config.ASTRONOMICAL_UNIT, "rs": 3000.0},
            'tolerances': {"path": 1e-9}
        })

    def test_defaults(self):
        """Test that only the command is required."""
        scenario = ScenarioConfig.from_dict({"command": "mercury"})
        self.assertEqual(scenario.format, "csv")
        self.assertIsNone(scenario.output)
        self.assertEqual(scenario.inputs, {})

    def test_rejections(self):
        """Test unknown keys, commands, formats, inputs and tolerances."""
        bad = [
            [],
            {"command": "delay", "verbose": True},
            {"command": "plot"},
            {"command": "delay", "format": "xml"},
            {"command": "delay", "inputs": {"kappa": {"value": 1.0, "unit": "1/m"}}},
            {"command": "delay", "inputs": [1.0]},
            {"command": "delay", "tolerances": {"speed": 1.0}},
            {"command": "bessel-check", "tolerances": {"bound": 0.0}},
            {"command": "bessel-check", "tolerances": {"bound": "small"}},
        ]
        for data in bad:
            with self.assertRaises(DomainError, msg=repr(data)):
                ScenarioConfig.from_dict(data)


class TestLoadScenario(unittest.TestCase):
    """Test cases for load_scenario."""

    def setUp(self):
        """Set up a scratch directory."""
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        """Remove the scratch directory."""
        self.tmp.cleanup()

    def _write(self, name, text):
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
        return path

    def test_load(self):
        """Test loading a scenario from disk."""
        path = self._write("bessel.json", json.dumps({
            "command": "bessel-check",
            "inputs": {"kappa": {"value": 25.0, "unit": "1/m"}, "samples": {"value": 10}},
            "tolerances": {"bound": 0.05}
        }))
        scenario = load_scenario(path)
        self.assertEqual(scenario.inputs, {"kappa": 25.0, "samples": 10})
        self.assertEqual(scenario.tolerances, {"bound": 0.05})

    def test_invalid_json(self):
        """Test that malformed JSON is a domain error."""
        with self.assertRaises(DomainError):
            load_scenario(self._write("broken.json", "{command: delay"))

    def test_missing_file(self):
        """Test that an unreadable scenario is a domain error."""
        with self.assertRaises(DomainError):
            load_scenario(os.path.join(self.tmp.name, "absent.json"))


if __name__ == "__main__":
    unittest.main()
