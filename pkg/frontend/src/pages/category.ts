import { ApiClient } from "../api";
import { limitSeries, renderChart } from "../chart";
import { clear, el } from "../dom";
import { renderHighlighted } from "../highlight";
import { createAddPhraseBox } from "../previewBox";
import { ACTIONS, ActionName, CategoryView, PhraseView, Span } from "../types";

const TOP_PHRASES = 10;

function phraseToggle(
  api: ApiClient,
  phrase: PhraseView,
  field: "case_sensitive" | "spell_variants" | "leet_variants",
  reload: () => void,
): HTMLElement {
  const box = el("input", { type: "checkbox" }) as HTMLInputElement;
  box.checked = phrase[field];
  box.addEventListener("change", async () => {
    try {
      await api.patchPhrase(phrase.phrase_id, { [field]: box.checked });
    } catch {
      box.checked = !box.checked; // leet without spell variants, etc.
    }
    reload();
  });
  return el("label", { class: "toggle" }, box);
}

function phraseRow(
  api: ApiClient,
  categoryId: string,
  phrase: PhraseView,
  matchTotals: Map<string, number>,
  reload: () => void,
): HTMLElement {
  const actionSelect = el(
    "select",
    {},
    ...ACTIONS.map((a) => {
      const option = el("option", { value: a }, a) as HTMLOptionElement;
      option.selected = a === phrase.action;
      return option;
    }),
  ) as HTMLSelectElement;
  actionSelect.addEventListener("change", async () => {
    await api.patchPhrase(phrase.phrase_id, { action: actionSelect.value as ActionName });
    reload();
  });
  return el(
    "tr",
    { class: "phrase-row" },
    el("td", { class: "phrase-text" }, phrase.text),
    el("td", { class: "count" }, String(matchTotals.get(phrase.phrase_id) ?? 0)),
    el("td", {}, phraseToggle(api, phrase, "case_sensitive", reload)),
    el("td", {}, phraseToggle(api, phrase, "spell_variants", reload)),
    el("td", {}, phraseToggle(api, phrase, "leet_variants", reload)),
    el("td", {}, actionSelect),
    el(
      "td",
      {},
      el("button", {
        class: "danger",
        onclick: async () => {
          await api.removePhrase(categoryId, phrase.phrase_id);
          reload();
        },
      }, "remove"),
    ),
  );
}

/** Category page: per-phrase chart, caught comments with highlights,
 * the phrase table with toggles, and the add-phrase live preview. */
export function categoryPage(api: ApiClient, categoryId: string): HTMLElement {
  const title = el("h2", {}, "Category");
  const meta = el("p", { class: "hint" });
  const chartHost = el("div", { class: "chart-host" });
  const caughtBody = el("tbody", {});
  const phraseBody = el("tbody", {});
  const diffHost = el("div", { class: "diff" });
  const shareBox = el("input", { type: "checkbox" }) as HTMLInputElement;

  let category: CategoryView | null = null;

  async function load(): Promise<void> {
    category = await api.getCategory(categoryId);
    title.textContent = category.name;
    meta.textContent = `${category.phrases.length} phrases · provenance: ${category.provenance.kind}`;
    shareBox.checked = category.shared;

    const series = await api.phraseSeries(categoryId);
    clear(chartHost);
    if (series.length) chartHost.append(renderChart(limitSeries(series, TOP_PHRASES)));
    const totals = new Map(series.map((s) => [s.key, s.total]));

    clear(phraseBody);
    for (const phrase of category.phrases) {
      phraseBody.append(phraseRow(api, categoryId, phrase, totals, () => void load()));
    }

    const table = await api.comments({ category_id: categoryId, page_size: 50 });
    clear(caughtBody);
    for (const row of table.items) {
      const spans: Span[] = row.phrase_spans.flatMap((p) => p.spans);
      const text = el("td", { class: "comment-text" });
      text.append(renderHighlighted(row.comment.text, spans));
      caughtBody.append(
        el(
          "tr",
          {},
          el("td", {}, row.comment.author_name),
          text,
          el("td", {}, row.comment.status),
        ),
      );
    }

    clear(diffHost);
    if (category.provenance.kind !== "scratch") {
      try {
        const diff = await api.diffUpstream(categoryId);
        if (diff.added.length || diff.removed.length) {
          diffHost.append(
            el(
              "div",
              { class: "diff-banner" },
              `Changes detected upstream — added: ${diff.added.join(", ") || "none"};`,
              ` removed: ${diff.removed.join(", ") || "none"}. Apply them yourself if wanted.`,
            ),
          );
        }
      } catch {
        // upstream gone: nothing to suggest
      }
    }
  }

  shareBox.addEventListener("change", async () => {
    await api.patchCategory(categoryId, { shared: shareBox.checked });
  });

  const root = el(
    "div",
    { class: "page category" },
    title,
    meta,
    el("label", { class: "share" }, shareBox, " share this category with other creators"),
    diffHost,
    el("h3", {}, "Comments caught, by phrase (last 30 days)"),
    chartHost,
    el(
      "table",
      { class: "phrases" },
      el(
        "thead",
        {},
        el(
          "tr",
          {},
          el("th", {}, "phrase"),
          el("th", {}, "caught"),
          el("th", {}, "case"),
          el("th", {}, "variants"),
          el("th", {}, "leet"),
          el("th", {}, "action"),
          el("th", {}, ""),
        ),
      ),
      phraseBody,
    ),
    createAddPhraseBox(api, categoryId, () => void load()),
    el("h3", {}, "Comments caught by this category"),
    el(
      "table",
      { class: "comments" },
      el("thead", {}, el("tr", {}, el("th", {}, "author"), el("th", {}, "comment"), el("th", {}, "status"))),
      caughtBody,
    ),
  );

  void load();
  return root;
}
