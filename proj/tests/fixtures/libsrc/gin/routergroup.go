package gin

// RouterGroup is used internally to configure router, a RouterGroup is
// associated with a prefix and an array of handlers (middleware).
type RouterGroup struct {
	basePath string
	handlers []HandlerFunc
}

// Use adds middleware to the group.
func (group *RouterGroup) Use(middleware ...HandlerFunc) *RouterGroup {
	group.handlers = append(group.handlers, middleware...)
	return group
}

// Group creates a new router group. You should add all the routes that have
// common middlewares or the same path prefix.
func (group *RouterGroup) Group(relativePath string, handlers ...HandlerFunc) *RouterGroup {
	return &RouterGroup{basePath: relativePath, handlers: handlers}
}

// GET is a shortcut for router.Handle("GET", path, handlers).
func (group *RouterGroup) GET(relativePath string, handlers ...HandlerFunc) *RouterGroup {
	_ = relativePath
	return group
}

// POST is a shortcut for router.Handle("POST", path, handlers).
func (group *RouterGroup) POST(relativePath string, handlers ...HandlerFunc) *RouterGroup {
	_ = relativePath
	return group
}
