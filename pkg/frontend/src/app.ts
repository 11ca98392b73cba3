/** Single-page review flow.
 *
 * One card per candidate term (ordered by ascending p-value, as the
 * server sends them), Keep/Discard buttons mirroring the terminal's
 * Y/N prompt, keyboard shortcuts K and D for the first pending card,
 * and a finalize button that stays disabled while anything is pending.
 */

import { SessionApiError, SessionClient } from './api.js';
import { renderPlotSvg } from './plot.js';
import {
  canFinalize,
  progressLabel,
  reconcile,
  withDecision,
} from './state.js';
import type { SessionState } from './types.js';

function tokenFromLocation(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get('token') ?? '';
}

export class ReviewApp {
  private state: SessionState | null = null;

  constructor(
    private readonly client: SessionClient,
    private readonly root: HTMLElement,
  ) {}

  async start(): Promise<void> {
    try {
      this.state = await this.client.fetchSession();
    } catch (err) {
      this.renderError(err);
      return;
    }
    await this.render();
    document.addEventListener('keydown', (ev) => this.onKey(ev));
  }

  private onKey(ev: KeyboardEvent): void {
    if (!this.state || this.state.finalized) return;
    const key = ev.key.toLowerCase();
    if (key !== 'k' && key !== 'd') return;
    const pending = this.state.candidates.find((c) => c.decision === 'pending');
    if (pending) {
      void this.decide(pending.id, key === 'k');
    }
  }

  private async decide(candidateId: number, keep: boolean): Promise<void> {
    if (!this.state) return;
    const optimistic = withDecision(this.state, candidateId, keep);
    this.state = optimistic;
    this.renderHeader();
    try {
      const server = await this.client.submitDecision(candidateId, keep);
      this.state = reconcile(optimistic, server);
    } catch (err) {
      if (err instanceof SessionApiError && err.code === 'AlreadyFinalized') {
        this.state = await this.client.fetchSession();
      } else {
        this.toast(err instanceof Error ? err.message : String(err));
        this.state = await this.client.fetchSession();
      }
    }
    await this.render();
  }

  private async finalize(): Promise<void> {
    if (!this.state || !canFinalize(this.state)) return;
    try {
      await this.client.finalize();
      this.state = await this.client.fetchSession();
    } catch (err) {
      this.toast(err instanceof Error ? err.message : String(err));
    }
    await this.render();
  }

  private toast(message: string): void {
    const el = document.createElement('div');
    el.className = 'toast';
    el.textContent = message;
    this.root.appendChild(el);
    setTimeout(() => el.remove(), 4000);
  }

  private renderError(err: unknown): void {
    const msg =
      err instanceof SessionApiError && err.code === 'BadToken'
        ? 'Bad or missing session token. Open the URL printed by the CLI.'
        : `Cannot reach the session server: ${err}`;
    this.root.innerHTML = `<p class="error">${msg}</p>
      <button id="retry">Retry</button>`;
    this.root.querySelector('#retry')?.addEventListener('click', () => {
      void this.start();
    });
  }

  private renderHeader(): void {
    const header = this.root.querySelector('#header');
    if (header && this.state) {
      header.textContent = this.state.finalized
        ? 'Session finalized — read only'
        : progressLabel(this.state);
    }
  }

  private async render(): Promise<void> {
    const state = this.state;
    if (!state) return;
    if (state.candidates.length === 0) {
      this.root.innerHTML = `
        <h1>Exploratory review</h1>
        <p>No squared or interaction terms were suggested.</p>
        <button id="finalize">Finalize</button>`;
    } else {
      const cards = state.candidates
        .map(
          (c) => `
        <section class="card" data-id="${c.id}">
          <h2>${c.label}</h2>
          <p>statistic ${c.test_statistic.toFixed(3)},
             p = ${c.p_value.toExponential(2)}</p>
          <div class="plots" id="plots-${c.id}">loading plots…</div>
          <div class="controls">
            <button class="keep" ${state.finalized ? 'disabled' : ''}>Keep (K)</button>
            <button class="discard" ${state.finalized ? 'disabled' : ''}>Discard (D)</button>
            <span class="decision">${c.decision}</span>
          </div>
        </section>`,
        )
        .join('');
      this.root.innerHTML = `
        <h1>Exploratory review</h1>
        <p id="header"></p>
        ${state.finalized ? '<p class="banner">Session finalized — read only</p>' : ''}
        ${cards}
        <button id="finalize" ${canFinalize(state) ? '' : 'disabled'}>Finalize</button>`;
    }
    this.renderHeader();

    this.root.querySelectorAll('.card').forEach((card) => {
      const id = Number((card as HTMLElement).dataset.id);
      card.querySelector('.keep')?.addEventListener('click', () => {
        void this.decide(id, true);
      });
      card.querySelector('.discard')?.addEventListener('click', () => {
        void this.decide(id, false);
      });
    });
    this.root.querySelector('#finalize')?.addEventListener('click', () => {
      void this.finalize();
    });

    await Promise.all(
      state.candidates.map(async (c) => {
        const target = this.root.querySelector(`#plots-${c.id}`);
        if (!target) return;
        try {
          const plots = await this.client.fetchPlot(c.id);
          target.innerHTML = plots.views.map(renderPlotSvg).join('');
        } catch {
          target.textContent = 'plots unavailable';
        }
      }),
    );
  }
}

export function boot(): void {
  const root = document.getElementById('app');
  if (!root) return;
  const client = new SessionClient(window.location.origin, tokenFromLocation());
  void new ReviewApp(client, root).start();
}

if (typeof window !== 'undefined' && typeof document !== 'undefined') {
  boot();
}
