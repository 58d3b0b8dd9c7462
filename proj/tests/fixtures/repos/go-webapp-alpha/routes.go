package alpha

import (
	"net/http"

	"github.com/gin-gonic/gin"
)

// RegisterRouter wires the API route group.
func RegisterRouter(router *gin.RouterGroup) {
	api := router.Group("/api")
	api.GET("/items", listHandler)
}

// HandleGetRequest answers a GET request with the echoed parameter.
func HandleGetRequest(c *gin.Context) {
	param := c.Query("param")
	c.JSON(http.StatusOK, gin.H{"param": param})
}

// HandlePostUser stores a user payload.
func HandlePostUser(c *gin.Context) {
	var payload map[string]string
	err := c.BindJSON(&payload)
	if err != nil {
		c.AbortWithStatus(http.StatusBadRequest)
		return
	}
	c.JSON(http.StatusCreated, payload)
}

// StartServer boots the engine on the given address.
func StartServer(addr string) error {
	e := gin.New()
	e.Use(gin.Recovery())
	return e.Run(addr)
}

// AuthMiddleware guards admin routes with basic auth.
func AuthMiddleware(users map[string]string) gin.HandlerFunc {
	return gin.BasicAuth(users)
}

// HealthCheck reports liveness.
func HealthCheck(c *gin.Context) {
	c.Status(http.StatusOK)
}

func listHandler(c *gin.Context) {
	c.JSON(http.StatusOK, gin.H{"items": itemNames()})
}

func itemNames() []string {
	names := []string{"alpha", "beta"}
	return names
}

func main() {
	StartServer(":8080")
}
