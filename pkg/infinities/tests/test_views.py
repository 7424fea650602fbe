import json
import tempfile
from pathlib import Path

from django.conf import settings
from django.db import connections
from django.test import SimpleTestCase, override_settings
from django.urls import reverse

from infinities.exceptions import UsageError
from infinities.views import MAX_BODY_SIZE, build_command_request, parse_request_body


class RunCommandViewTests(SimpleTestCase):

    def post(self, payload):
        body = payload if isinstance(payload, (str, bytes)) else json.dumps(payload)
        return self.client.post(reverse('infinities:run'), data=body, content_type='application/json')

    def test_limit(self):
        response = self.post({'command': 'limit', 'args': ['(n+1)/(n-1)'], 'depth': 3})
        self.assertEqual(response.status_code, 200)
        document = response.json()
        self.assertEqual(document['result'], '1 + 2/w + 2/w^2')
        self.assertEqual(document['diagnostics']['exit_code'], 0)

    def test_options(self):
        response = self.post({'command': 'table', 'options': {'generation': 1, 'unicode': True}})
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.json()['result'], ['ln(ω)', 'ω', 'exp(ω)'])

    def test_oscillatory_is_bad_request(self):
        response = self.post({'command': 'limit', 'args': ['sin(n)']})
        self.assertEqual(response.status_code, 400)
        self.assertEqual(response.json()['diagnostics']['exit_code'], 3)

    def test_parse_error_reports_position(self):
        response = self.post({'command': 'lead', 'args': ['sin(']})
        self.assertEqual(response.status_code, 400)
        diagnostics = response.json()['diagnostics']
        self.assertEqual(diagnostics['error'], 'ParseError')
        self.assertEqual(diagnostics['position'], 4)

    def test_invalid_json(self):
        response = self.post('{not json')
        self.assertEqual(response.status_code, 400)
        self.assertEqual(response.json()['diagnostics']['exit_code'], 2)

    def test_unknown_option(self):
        response = self.post({'command': 'limit', 'args': ['n'], 'options': {'verbose': True}})
        self.assertEqual(response.status_code, 400)
        self.assertIn('verbose', response.json()['diagnostics']['message'])

    def test_wrong_arity(self):
        response = self.post({'command': 'compare', 'args': ['w']})
        self.assertEqual(response.status_code, 400)

    def test_fit_accepts_sample_text(self):
        rows = '\n'.join(f"{n},{3 * n ** 2}" for n in (10 ** k for k in range(2, 12)))
        response = self.post({'command': 'fit', 'args': ['n,value\n' + rows + '\n']})
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.json()['diagnostics']['proto'], 'w^2')

    def test_fit_does_not_read_server_files(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'samples.csv'
            rows = [f"{n},{2 * n}" for n in (10 ** k for k in range(2, 12))]
            path.write_text('\n'.join(rows) + '\n', encoding='utf-8')
            response = self.post({'command': 'fit', 'args': [str(path)]})
        self.assertEqual(response.status_code, 400)
        self.assertEqual(response.json()['diagnostics']['exit_code'], 2)

    def test_malformed_samples_are_bad_request(self):
        response = self.post({'command': 'fit', 'args': ['10,abc\n20,1\n']})
        self.assertEqual(response.status_code, 400)
        self.assertEqual(response.json()['diagnostics']['error'], 'UsageError')

    def test_get_is_not_allowed(self):
        response = self.client.get(reverse('infinities:run'))
        self.assertEqual(response.status_code, 405)


class HelperTests(SimpleTestCase):

    def test_parse_request_body(self):
        self.assertEqual(parse_request_body(b'{"command": "lead"}'), ({'command': 'lead'}, ''))
        self.assertEqual(parse_request_body(b''), ({}, ''))
        _, error = parse_request_body(b'[1, 2]')
        self.assertTrue(error)
        _, error = parse_request_body(b' ' * (MAX_BODY_SIZE + 1))
        self.assertTrue(error)

    def test_build_command_request(self):
        request = build_command_request({'command': 'check', 'args': ['w', 'w^2'],
                                         'options': {'schedule': ['100', '1000']}})
        self.assertEqual(request.output, 'json')
        self.assertEqual(request.schedule, ['100', '1000'])
        self.assertFalse(request.allow_paths)
        with self.assertRaises(UsageError):
            build_command_request({'command': 'limit', 'args': 'n'})


class EngineConfigViewTests(SimpleTestCase):

    def test_config(self):
        response = self.client.get(reverse('infinities:config'))
        self.assertEqual(response.status_code, 200)
        config = response.json()
        self.assertEqual(config['DEPTH'], 4)
        self.assertEqual(config['SCHEDULE'][0], '100')

    @override_settings(OMEGALIM={'GUARD_TERMS': 5}, OMEGALIM_DEPTH=6)
    def test_config_reflects_settings(self):
        config = self.client.get(reverse('infinities:config')).json()
        self.assertEqual(config['GUARD_TERMS'], 5)
        self.assertEqual(config['DEPTH'], 6)
        self.assertEqual(config['MIN_SAMPLES'], 8)


class ProjectSettingsTests(SimpleTestCase):

    def test_no_database_is_configured(self):
        self.assertEqual(connections['default'].settings_dict['ENGINE'], 'django.db.backends.dummy')
        self.assertEqual(settings.INSTALLED_APPS, ['infinities.apps.InfinitiesConfig'])
