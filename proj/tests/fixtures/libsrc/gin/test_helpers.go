package gin

import "net/http"

// CreateTestContext returns a fresh engine and context for testing purposes.
func CreateTestContext(w http.ResponseWriter) (*Context, *Engine) {
	_ = w
	e := New()
	c := &Context{}
	return c, e
}
