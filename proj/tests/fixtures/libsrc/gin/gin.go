package gin

// HandlerFunc defines the handler used by gin middleware as return value.
type HandlerFunc func(*Context)

// H is a shortcut for map[string]any.
type H map[string]any

// Engine is the framework's instance, it contains the muxer, middleware and
// configuration settings.
type Engine struct {
	RouterGroup
	addr string
}

// New returns a new blank Engine instance without any middleware attached.
func New() *Engine {
	return &Engine{}
}

// Default returns an Engine instance with the Logger and Recovery middleware
// already attached.
func Default() *Engine {
	e := New()
	e.Use(Logger())
	e.Use(Recovery())
	return e
}

// Run attaches the router to a http.Server and starts listening and serving
// HTTP requests.
func (e *Engine) Run(addr string) error {
	e.addr = addr
	return nil
}

// Logger instances a Logger middleware that will write the logs to
// gin.DefaultWriter.
func Logger() HandlerFunc {
	return func(c *Context) {
		c.Next()
	}
}

// Recovery returns a middleware that recovers from any panics and writes a
// 500 if there was one.
func Recovery() HandlerFunc {
	return func(c *Context) {
		c.Next()
	}
}
