/** Entry point: wires the chat view and collaboration panel into the page. */

import { ApiClient } from './api.js';
import { ChatView } from './chat.js';
import { CollaborationPanel } from './sessions.js';

async function boot(): Promise<void> {
  const doc = document;
  const app = doc.getElementById('app');
  if (!app) return;

  const params = new URLSearchParams(window.location.search);
  const user = params.get('user') ?? `guest-${Math.random().toString(36).slice(2, 8)}`;
  const api = new ApiClient('');

  const session = await api.createSession(user);
  const chat = new ChatView(doc, api, session, user);
  const panel = new CollaborationPanel(doc, api, user);

  const header = doc.createElement('header');
  header.className = 'app-header';
  header.textContent = `exploring as ${user} (session ${session})`;
  app.appendChild(header);

  const columns = doc.createElement('div');
  columns.className = 'columns';
  columns.appendChild(chat.root);
  columns.appendChild(panel.root);
  app.appendChild(columns);

  await panel.refreshSessions();
  setInterval(() => void panel.refreshSessions(), 2000);
}

void boot();
