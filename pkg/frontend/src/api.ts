import type {
  BuiltinView,
  CategoryView,
  CommentPageView,
  LoginView,
  PhraseView,
  PreviewView,
  SeriesView,
} from "./types";

export class ApiRequestError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface PreviewOptions {
  case_sensitive?: boolean;
  spell_variants?: boolean;
  leet_variants?: boolean;
}

export class ApiClient {
  constructor(
    public baseUrl: string = "",
    public token: string | null = null,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    if (body !== undefined) headers["Content-Type"] = "application/json";
    const response = await fetch(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiRequestError(response.status, payload.error ?? "Error", payload.message ?? "request failed");
    }
    return payload as T;
  }

  login(ownerName: string): Promise<LoginView> {
    return this.request("POST", "/login", { owner_name: ownerName });
  }

  listCategories(): Promise<CategoryView[]> {
    return this.request("GET", "/categories");
  }

  getCategory(id: string): Promise<CategoryView> {
    return this.request("GET", `/categories/${id}`);
  }

  createCategory(name: string): Promise<CategoryView> {
    return this.request("POST", "/categories", { name });
  }

  deleteCategory(id: string): Promise<{ ok: boolean }> {
    return this.request("DELETE", `/categories/${id}`);
  }

  patchCategory(id: string, patch: { name?: string; shared?: boolean }): Promise<CategoryView> {
    return this.request("PATCH", `/categories/${id}`, patch);
  }

  addPhrase(
    categoryId: string,
    body: { text: string; action: string } & PreviewOptions,
  ): Promise<PhraseView> {
    return this.request("POST", `/categories/${categoryId}/phrases`, body);
  }

  removePhrase(categoryId: string, phraseId: string): Promise<{ ok: boolean }> {
    return this.request("DELETE", `/categories/${categoryId}/phrases/${phraseId}`);
  }

  patchPhrase(phraseId: string, patch: Partial<PhraseView>): Promise<PhraseView> {
    return this.request("PATCH", `/phrases/${phraseId}`, patch);
  }

  preview(text: string, options: PreviewOptions = {}): Promise<PreviewView> {
    const params = new URLSearchParams({ text });
    for (const key of ["case_sensitive", "spell_variants", "leet_variants"] as const) {
      if (options[key] !== undefined) params.set(key, String(options[key]));
    }
    return this.request("GET", `/preview?${params}`);
  }

  listBuiltins(): Promise<BuiltinView[]> {
    return this.request("GET", "/builtins");
  }

  importBuiltin(builtinId: string): Promise<CategoryView> {
    return this.request("POST", `/builtins/${builtinId}/import`);
  }

  cloneCategory(categoryId: string): Promise<CategoryView> {
    return this.request("POST", `/categories/${categoryId}/clone`);
  }

  diffUpstream(categoryId: string): Promise<{ added: string[]; removed: string[] }> {
    return this.request("GET", `/categories/${categoryId}/diff-upstream`);
  }

  categorySeries(): Promise<SeriesView[]> {
    return this.request("GET", "/analytics/categories");
  }

  phraseSeries(categoryId: string): Promise<SeriesView[]> {
    return this.request("GET", `/analytics/categories/${categoryId}/phrases`);
  }

  comments(params: {
    search?: string;
    category_id?: string;
    sort?: string;
    page?: number;
    page_size?: number;
  }): Promise<CommentPageView> {
    const query = new URLSearchParams();
    if (params.search) query.set("search", params.search);
    if (params.category_id) query.set("category_id", params.category_id);
    if (params.sort) query.set("sort", params.sort);
    if (params.page) query.set("page", String(params.page));
    if (params.page_size) query.set("page_size", String(params.page_size));
    return this.request("GET", `/comments?${query}`);
  }

  backfill(): Promise<{ ingested: number }> {
    return this.request("POST", "/ingest/backfill");
  }

  poll(): Promise<{ new_comments: number; events_created: number; actions_applied: number }> {
    return this.request("POST", "/ingest/poll");
  }

  rescan(): Promise<{ events_created: number }> {
    return this.request("POST", "/ingest/rescan");
  }
}
