import doctest
import os
import unittest
from unittest.mock import patch

from shtukacrit import config
from shtukacrit.config import THREADS_ENV_VAR, get_thread_count, parallel_map


class TestThreads(unittest.TestCase):
    @patch.dict(os.environ, {THREADS_ENV_VAR: "3"})
    def test_env_var(self):
        """Test that a positive value is used as is."""
        self.assertEqual(get_thread_count(), 3)

    @patch("os.cpu_count", return_value=5)
    def test_invalid_values_fall_back(self, mock_cpu_count):
        """Test that junk and non-positive values are ignored with a warning."""
        for raw in ("0", "-2", "many"):
            with (
                self.subTest(raw=raw),
                patch.dict(os.environ, {THREADS_ENV_VAR: raw}),
                self.assertLogs("shtukacrit.config", level="WARNING"),
            ):
                self.assertEqual(get_thread_count(), 5)

    def test_documented_example(self):
        """Test that the documented example runs and leaves the environment untouched."""
        before = dict(os.environ)
        self.assertEqual(doctest.testmod(config).failed, 0)
        self.assertEqual(dict(os.environ), before)

    @patch("os.cpu_count", return_value=None)
    def test_unset(self, mock_cpu_count):
        """Test the default when the hardware count is unknown."""
        with patch.dict(os.environ, {}, clear=True):
            self.assertEqual(get_thread_count(), 1)


class TestParallelMap(unittest.TestCase):
    def test_order_preserved(self):
        """Test that results come back in input order on several threads."""
        with patch.dict(os.environ, {THREADS_ENV_VAR: "4"}):
            self.assertEqual(parallel_map(lambda x: x * x, range(10)), [x * x for x in range(10)])

    def test_single_thread(self):
        """Test the sequential path and empty input."""
        with patch.dict(os.environ, {THREADS_ENV_VAR: "1"}):
            self.assertEqual(parallel_map(str, [1, 2]), ["1", "2"])
            self.assertEqual(parallel_map(str, []), [])


if __name__ == "__main__":
    unittest.main()
