/** Bootstrap: load the catalogues, wire the panels, keep them in sync. */

import { api } from "./api.js";
import {
  AppContext, renderAnswer, renderCheckDashboard, renderHeader,
  renderModelBrowser, renderQuestionPanel, renderWhatIfPanel, reportError,
} from "./panels.js";
import { initialState, selectProfile } from "./state.js";

async function boot(): Promise<void> {
  const [profiles, catalogue] = await Promise.all([api.profiles(), api.questions()]);
  const ctx: AppContext = {
    state: initialState(),
    profiles,
    catalogue,
    refresh: () => { void render(ctx); },
  };
  const legalSupport = profiles.find((p) => p.name === "legal_support");
  if (legalSupport) {
    ctx.state = selectProfile(ctx.state, legalSupport, catalogue);
  }
  await render(ctx);
}

async function render(ctx: AppContext): Promise<void> {
  const panel = (id: string) => document.getElementById(id) as HTMLElement;
  await renderHeader(ctx, panel("header-controls"));
  renderModelBrowser(ctx, panel("model-browser"));
  renderCheckDashboard(ctx, panel("check-dashboard"));
  renderQuestionPanel(ctx, panel("question-panel"));
  await renderWhatIfPanel(ctx, panel("whatif-panel"));
  renderAnswer(ctx, panel("answer-panel"));
}

boot().catch(reportError);
