/** Browser bootstrap: wires the trial file input and mounts the app. */

import { ApiClient } from './api.js';
import { App } from './app.js';

declare global {
  interface Window {
    GAITBENCH_API?: string;
  }
}

const baseUrl = window.GAITBENCH_API ?? 'http://127.0.0.1:8430';
const root = document.getElementById('app');
if (!root) throw new Error('missing #app element');

const app = new App(root, new ApiClient(baseUrl), document);
void app.init();

const input = document.getElementById('trial-input') as HTMLInputElement | null;
input?.addEventListener('change', async () => {
  const file = input.files?.[0];
  if (!file) return;
  const text = await file.text();
  await app.loadTrialText(text);
  input.value = '';
});
